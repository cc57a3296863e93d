#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "kresling/calibration.hpp"
#include "kresling/design_space.hpp"
#include "kresling/geometry.hpp"

namespace kresling {

/// Binary panel-state word of an actuator: one bit per unique bistable depth
/// present in the design, ascending depth order. All units sharing a depth
/// snap synchronously, so they share one bit (true = popped outward, s1).
struct PanelState {
    std::vector<int> deltas;  // ascending unique depths, e.g. {2, 4}
    std::vector<bool> bits;   // bits[i] belongs to deltas[i]

    static PanelState all_s0(const ActuatorDesign& design);

    /// Parses "s01" style notation against the design's depth classes.
    static PanelState from_string(std::string_view text, const ActuatorDesign& design);

    std::string to_string() const;  // "s01"; bare "s" when no bistable depth

    bool bit_for_delta(int delta) const;
    PanelState with_bit(int delta, bool value) const;

    /// Branch a unit of this kind sits on under this state.
    PanelBranch branch_of(ModuleKind kind) const;

    std::uint32_t pack() const;  // bits as an integer key, deltas[0] = LSB

    bool operator==(const PanelState&) const = default;
};

enum class NodeRole : std::uint8_t {
    stable,      // zero-pressure point of a state
    transition,  // branch endpoint at a snap threshold (pre-snap configuration)
    extreme,     // branch endpoint at the global inflation/deflation limit
};

enum class PressureRegime : std::uint8_t { negative, zero, positive };

PressureRegime regime_of(double pressure_kpa);

/// One (state, pressure keypoint) configuration of the diagram.
struct DiagramNode {
    PanelState state;
    double pressure_kpa = 0.0;
    NodeRole role = NodeRole::stable;
    std::string label;  // "stable", "pre_snap_up_d3", "max_inflation", ...
};

/// Snapping transition: crossing the trigger flips exactly one depth bit.
struct DiagramEdge {
    PanelState from;
    PanelState to;
    int delta = 0;
    bool snap_up = false;       // true: p_plus crossing (0 -> 1)
    double trigger_kpa = 0.0;
};

/// Pressure-driven state diagram: 2^m stable states, 3 nodes per state
/// (lower endpoint, rest, upper endpoint), 2(2^m - 1) snapping transitions.
struct StateDiagram {
    std::vector<int> deltas;
    std::vector<PanelState> stable_states;  // ordered by packed bits
    std::vector<DiagramNode> nodes;
    std::vector<DiagramEdge> edges;

    /// Pressure window [lower, upper] within which the state persists.
    double state_lower_kpa(const PanelState& state, const KeypointTable& table,
                           const ActuatorDesign& design) const;
    double state_upper_kpa(const PanelState& state, const KeypointTable& table,
                           const ActuatorDesign& design) const;
};

StateDiagram build_state_diagram(const ActuatorDesign& design, const KeypointTable& table);

/// Extremum pressure the input is driven to before the next event.
struct PressureEvent {
    double target_kpa = 0.0;
};

enum class SampleKind : std::uint8_t { initial, pre_snap, post_snap, extremum };

struct TrajectorySample {
    std::size_t event_index = 0;  // 0 = initial configuration
    double pressure_kpa = 0.0;
    PanelState state;
    SampleKind kind = SampleKind::initial;
    ActuatorPose pose;
};

struct SimulateOptions {
    Clamp clamp = Clamp::strict;
    TransformOrder order = TransformOrder::tilt_then_twist;
};

/// Per-unit kinematics of the design in the given state at one pressure.
std::vector<UnitKinematics> kinematics_for(const ActuatorDesign& design,
                                           const KeypointTable& table,
                                           const PanelState& state, double pressure_kpa,
                                           Clamp clamp = Clamp::strict);

ActuatorPose pose_at(const ActuatorDesign& design, const KeypointTable& table,
                     const PanelState& state, double pressure_kpa,
                     const SimulateOptions& options = {});

/// Deterministic quasi-static replay. Thresholds crossed between consecutive
/// extrema fire in crossing order and are sampled just before and just after
/// each snap (threshold pressure, pre- and post-snap branches); each event
/// extremum is sampled as well. Crossing is strict: an event that stops
/// exactly at a threshold does not fire it.
std::vector<TrajectorySample> simulate_path(const ActuatorDesign& design,
                                            const KeypointTable& table,
                                            const std::vector<PressureEvent>& events,
                                            const PanelState& initial,
                                            const SimulateOptions& options = {});

struct PlanResult {
    bool reachable = false;
    std::vector<PressureEvent> events;
    PanelState final_state;
    double final_pressure_kpa = 0.0;
};

/// Fewest-event pressure plan from `from` (at rest) to the goal state; ties
/// broken by smallest total |pressure| swing. The returned plan is validated
/// by replay before being returned.
PlanResult plan_path(const ActuatorDesign& design, const KeypointTable& table,
                     const PanelState& goal, const PanelState& from,
                     const SimulateOptions& options = {});

/// Plans toward the diagram node whose tip lies closest to target (must be
/// within tolerance_mm); the plan ends at that node's exact pressure.
PlanResult plan_path_to_tip(const ActuatorDesign& design, const KeypointTable& table,
                            const Eigen::Vector3d& target_mm, double tolerance_mm,
                            const PanelState& from, const SimulateOptions& options = {});

}  // namespace kresling
