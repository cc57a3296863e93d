#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kresling/design_space.hpp"
#include "kresling/geometry.hpp"

namespace kresling {

/// Which of the two panel states a keypoint belongs to: s0 (modified panel
/// folded inward) or s1 (popped outward). Kresling units only have s0.
enum class PanelBranch : std::uint8_t { s0, s1 };

std::string_view branch_name(PanelBranch branch);  // "s0" / "s1"

/// Out-of-range handling for pressure lookups.
enum class Clamp : std::uint8_t { strict, clamp };

struct CalibrationKeypoint {
    double pressure_kpa = 0.0;
    PanelBranch state = PanelBranch::s0;
    UnitKinematics kinematics;
};

/// Per-kind experimental data: snap thresholds plus the kinematic keypoints
/// that anchor the piecewise-linear model on each state branch.
struct KindCalibration {
    ModuleKind kind = ModuleKind::kresling;
    double p_plus_kpa = 0.0;   // unused for Kresling
    double p_minus_kpa = 0.0;  // unused for Kresling
    std::vector<CalibrationKeypoint> keypoints;
    std::optional<std::string> note;

    /// Keypoints of one branch, ascending in pressure.
    std::vector<CalibrationKeypoint> branch(PanelBranch b) const;
};

/// Validated, immutable keypoint table. Safe to share across threads.
class KeypointTable {
public:
    KeypointTable(ModelConstants constants, std::vector<KindCalibration> kinds);

    static KeypointTable from_json_text(std::string_view text,
                                        std::string_view source_name = "<string>");
    static KeypointTable load_file(const std::string& path);

    /// Table parsed from the embedded default calibration document.
    static const KeypointTable& default_table();

    /// Canonical serialization: kinds in fixed order, keypoints sorted by
    /// (state, pressure). Semantically round-trips with from_json_text.
    std::string to_json_text() const;

    /// FNV-1a 64 over the canonical serialization.
    std::uint64_t checksum() const;

    const ModelConstants& constants() const { return constants_; }
    const KindCalibration& kind(ModuleKind kind) const;

    double p_plus(ModuleKind kind) const;
    double p_minus(ModuleKind kind) const;

    /// Common keypoint pressure extremes shared by every kind.
    double max_inflation_kpa() const { return max_inflation_; }
    double max_deflation_kpa() const { return max_deflation_; }

    /// Covered pressure range [min, max] of one state branch.
    std::pair<double, double> branch_range(ModuleKind kind, PanelBranch branch) const;

    /// Piecewise-linear interpolation along the requested state branch.
    /// Exact keypoint values are returned at keypoint pressures. In strict
    /// mode, pressures outside the branch range throw ExtrapolationError.
    UnitKinematics kinematics_at(ModuleKind kind, PanelBranch branch, double pressure_kpa,
                                 Clamp clamp = Clamp::strict) const;

    /// Largest bend angle recorded for the kind (the cap-contact clip).
    double theta_max_deg(ModuleKind kind) const;

private:
    void validate() const;
    const KindCalibration* find(ModuleKind kind) const;
    const std::vector<CalibrationKeypoint>& cached_branch(ModuleKind kind,
                                                          PanelBranch branch) const;

    ModelConstants constants_;
    std::vector<KindCalibration> kinds_;  // fixed order: kresling, delta2, delta3, delta4
    // Sorted per-branch keypoints, indexed [kind][branch]; interpolation is
    // on the hot path of the searches.
    std::vector<std::array<std::vector<CalibrationKeypoint>, 2>> branches_;
    double max_inflation_ = 0.0;
    double max_deflation_ = 0.0;
};

/// The embedded default calibration document (JSON).
std::string_view default_calibration_text();

}  // namespace kresling
