#include "kresling/state_machine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

namespace kresling {

namespace {

void check_state_matches(const PanelState& state, const ActuatorDesign& design,
                         const char* what) {
    if (state.deltas != design.unique_deltas() || state.bits.size() != state.deltas.size())
        throw std::invalid_argument(std::string(what) +
                                    ": panel state does not match the design's depth classes");
}

}  // namespace

PanelState PanelState::all_s0(const ActuatorDesign& design) {
    PanelState state;
    state.deltas = design.unique_deltas();
    state.bits.assign(state.deltas.size(), false);
    return state;
}

PanelState PanelState::from_string(std::string_view text, const ActuatorDesign& design) {
    PanelState state = all_s0(design);
    if (text.empty() || text[0] != 's')
        throw std::invalid_argument("panel state must look like \"s01\"");
    if (text.size() - 1 != state.deltas.size())
        throw std::invalid_argument("panel state '" + std::string(text) + "' has " +
                                    std::to_string(text.size() - 1) + " bits but the design has " +
                                    std::to_string(state.deltas.size()) + " depth classes");
    for (std::size_t i = 0; i < state.bits.size(); ++i) {
        char c = text[i + 1];
        if (c != '0' && c != '1')
            throw std::invalid_argument("panel state bits must be 0 or 1");
        state.bits[i] = c == '1';
    }
    return state;
}

std::string PanelState::to_string() const {
    std::string out = "s";
    for (bool bit : bits) out += bit ? '1' : '0';
    return out;
}

bool PanelState::bit_for_delta(int delta) const {
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (deltas[i] == delta) return bits[i];
    throw std::invalid_argument("depth " + std::to_string(delta) + " not present in state");
}

PanelState PanelState::with_bit(int delta, bool value) const {
    PanelState out = *this;
    for (std::size_t i = 0; i < deltas.size(); ++i)
        if (deltas[i] == delta) {
            out.bits[i] = value;
            return out;
        }
    throw std::invalid_argument("depth " + std::to_string(delta) + " not present in state");
}

PanelBranch PanelState::branch_of(ModuleKind kind) const {
    if (!is_bistable(kind)) return PanelBranch::s0;
    return bit_for_delta(delta_mm(kind)) ? PanelBranch::s1 : PanelBranch::s0;
}

std::uint32_t PanelState::pack() const {
    std::uint32_t packed = 0;
    for (std::size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) packed |= 1u << i;
    return packed;
}

PressureRegime regime_of(double pressure_kpa) {
    if (pressure_kpa > 0) return PressureRegime::positive;
    if (pressure_kpa < 0) return PressureRegime::negative;
    return PressureRegime::zero;
}

double StateDiagram::state_upper_kpa(const PanelState& state, const KeypointTable& table,
                                     const ActuatorDesign& design) const {
    double upper = std::numeric_limits<double>::infinity();
    for (const ModuleSpec& unit : design.units)
        upper = std::min(upper, table.branch_range(unit.kind, state.branch_of(unit.kind)).second);
    return std::min(upper, table.max_inflation_kpa());
}

double StateDiagram::state_lower_kpa(const PanelState& state, const KeypointTable& table,
                                     const ActuatorDesign& design) const {
    double lower = -std::numeric_limits<double>::infinity();
    for (const ModuleSpec& unit : design.units)
        lower = std::max(lower, table.branch_range(unit.kind, state.branch_of(unit.kind)).first);
    return std::max(lower, table.max_deflation_kpa());
}

StateDiagram build_state_diagram(const ActuatorDesign& design, const KeypointTable& table) {
    design.validate();
    StateDiagram diagram;
    diagram.deltas = design.unique_deltas();
    const std::size_t m = diagram.deltas.size();

    for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
        PanelState state;
        state.deltas = diagram.deltas;
        state.bits.resize(m);
        for (std::size_t i = 0; i < m; ++i) state.bits[i] = mask & (1u << i);
        diagram.stable_states.push_back(state);
    }
    std::sort(diagram.stable_states.begin(), diagram.stable_states.end(),
              [](const PanelState& a, const PanelState& b) {
                  return a.to_string() < b.to_string();
              });

    for (const PanelState& state : diagram.stable_states) {
        // Raising pressure fires the lowest p_plus among unpopped depths
        // first; the state cannot outlive that crossing.
        int up_delta = 0;
        double up_trigger = std::numeric_limits<double>::infinity();
        int down_delta = 0;
        double down_trigger = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m; ++i) {
            const int delta = state.deltas[i];
            const ModuleKind kind = kind_from_delta(delta);
            if (!state.bits[i] && table.p_plus(kind) < up_trigger) {
                up_trigger = table.p_plus(kind);
                up_delta = delta;
            }
            if (state.bits[i] && table.p_minus(kind) > down_trigger) {
                down_trigger = table.p_minus(kind);
                down_delta = delta;
            }
        }

        const double lower = diagram.state_lower_kpa(state, table, design);
        const double upper = diagram.state_upper_kpa(state, table, design);

        DiagramNode low_node{state, lower, NodeRole::extreme, "max_deflation"};
        if (down_delta != 0) {
            low_node.role = NodeRole::transition;
            low_node.label = "pre_snap_down_d" + std::to_string(down_delta);
            diagram.edges.push_back({state, state.with_bit(down_delta, false), down_delta,
                                     false, down_trigger});
        }
        DiagramNode high_node{state, upper, NodeRole::extreme, "max_inflation"};
        if (up_delta != 0) {
            high_node.role = NodeRole::transition;
            high_node.label = "pre_snap_up_d" + std::to_string(up_delta);
            diagram.edges.push_back({state, state.with_bit(up_delta, true), up_delta,
                                     true, up_trigger});
        }

        diagram.nodes.push_back(low_node);
        diagram.nodes.push_back({state, 0.0, NodeRole::stable, "stable"});
        diagram.nodes.push_back(high_node);
    }

    // Threshold order: snap-out edges by rising trigger, then snap-back
    // edges in the order met while deflating.
    std::sort(diagram.edges.begin(), diagram.edges.end(),
              [](const DiagramEdge& a, const DiagramEdge& b) {
                  if (a.snap_up != b.snap_up) return a.snap_up;
                  if (a.trigger_kpa != b.trigger_kpa)
                      return a.snap_up ? a.trigger_kpa < b.trigger_kpa
                                       : a.trigger_kpa > b.trigger_kpa;
                  return a.from.to_string() < b.from.to_string();
              });
    return diagram;
}

std::vector<UnitKinematics> kinematics_for(const ActuatorDesign& design,
                                           const KeypointTable& table, const PanelState& state,
                                           double pressure_kpa, Clamp clamp) {
    check_state_matches(state, design, "kinematics_for");
    std::vector<UnitKinematics> kins;
    kins.reserve(design.units.size());
    for (const ModuleSpec& unit : design.units)
        kins.push_back(
            table.kinematics_at(unit.kind, state.branch_of(unit.kind), pressure_kpa, clamp));
    return kins;
}

ActuatorPose pose_at(const ActuatorDesign& design, const KeypointTable& table,
                     const PanelState& state, double pressure_kpa,
                     const SimulateOptions& options) {
    auto kins = kinematics_for(design, table, state, pressure_kpa, options.clamp);
    return actuator_pose(design, kins, table.constants(), options.order);
}

namespace {

struct Crossing {
    int delta = 0;
    bool snap_up = false;
    double trigger_kpa = 0.0;
};

/// Advances the state along a monotone pressure sweep, returning the snaps
/// in crossing order. Crossing is strict at both ends: a sweep that starts
/// or stops exactly at a threshold does not fire it on the stopping side.
std::vector<Crossing> sweep_state(PanelState& state, const KeypointTable& table,
                                  double from_kpa, double to_kpa) {
    std::vector<Crossing> crossings;
    if (to_kpa > from_kpa) {
        for (;;) {
            int best_delta = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < state.deltas.size(); ++i) {
                if (state.bits[i]) continue;
                double trigger = table.p_plus(kind_from_delta(state.deltas[i]));
                if (trigger >= from_kpa && trigger < to_kpa && trigger < best) {
                    best = trigger;
                    best_delta = state.deltas[i];
                }
            }
            if (best_delta == 0) break;
            state = state.with_bit(best_delta, true);
            crossings.push_back({best_delta, true, best});
            from_kpa = best;
        }
    } else if (to_kpa < from_kpa) {
        for (;;) {
            int best_delta = 0;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < state.deltas.size(); ++i) {
                if (!state.bits[i]) continue;
                double trigger = table.p_minus(kind_from_delta(state.deltas[i]));
                if (trigger <= from_kpa && trigger > to_kpa && trigger > best) {
                    best = trigger;
                    best_delta = state.deltas[i];
                }
            }
            if (best_delta == 0) break;
            state = state.with_bit(best_delta, false);
            crossings.push_back({best_delta, false, best});
            from_kpa = best;
        }
    }
    return crossings;
}

}  // namespace

std::vector<TrajectorySample> simulate_path(const ActuatorDesign& design,
                                            const KeypointTable& table,
                                            const std::vector<PressureEvent>& events,
                                            const PanelState& initial,
                                            const SimulateOptions& options) {
    design.validate();
    check_state_matches(initial, design, "simulate_path");

    std::vector<TrajectorySample> trajectory;
    auto record = [&](std::size_t event_index, double pressure, const PanelState& state,
                      SampleKind kind) {
        trajectory.push_back({event_index, pressure, state, kind,
                              pose_at(design, table, state, pressure, options)});
    };

    PanelState state = initial;
    double pressure = 0.0;
    record(0, pressure, state, SampleKind::initial);

    for (std::size_t i = 0; i < events.size(); ++i) {
        double target = events[i].target_kpa;
        if (!std::isfinite(target))
            throw std::invalid_argument("pressure event " + std::to_string(i + 1) +
                                        " must be finite");
        if (target < table.max_deflation_kpa() || target > table.max_inflation_kpa()) {
            if (options.clamp == Clamp::strict) {
                std::ostringstream msg;
                msg << "pressure event " << i + 1 << " (" << target
                    << " kPa) outside the calibration range ["
                    << table.max_deflation_kpa() << ", " << table.max_inflation_kpa() << "]";
                throw ExtrapolationError(msg.str());
            }
            target = std::clamp(target, table.max_deflation_kpa(), table.max_inflation_kpa());
        }

        PanelState swept = state;
        for (const Crossing& crossing : sweep_state(swept, table, pressure, target)) {
            record(i + 1, crossing.trigger_kpa, state, SampleKind::pre_snap);
            state = state.with_bit(crossing.delta, crossing.snap_up);
            record(i + 1, crossing.trigger_kpa, state, SampleKind::post_snap);
        }
        pressure = target;
        record(i + 1, pressure, state, SampleKind::extremum);
    }
    return trajectory;
}

namespace {

/// Candidate event pressures the planner may drive to: rest, the exact
/// thresholds (stopping there does not fire), just past each threshold, and
/// the global range limits.
std::vector<double> planner_levels(const ActuatorDesign& design, const KeypointTable& table) {
    std::vector<double> ups, downs;
    for (int delta : design.unique_deltas()) {
        ups.push_back(table.p_plus(kind_from_delta(delta)));
        downs.push_back(table.p_minus(kind_from_delta(delta)));
    }

    std::set<double> levels{0.0, table.max_deflation_kpa(), table.max_inflation_kpa()};
    for (double p : ups) levels.insert(p);
    for (double p : downs) levels.insert(p);

    std::vector<double> up_bounds = ups;
    up_bounds.push_back(table.max_inflation_kpa());
    std::sort(up_bounds.begin(), up_bounds.end());
    for (double p : ups) {
        auto next = std::upper_bound(up_bounds.begin(), up_bounds.end(), p);
        double margin = std::min(1.0, 0.5 * (*next - p));
        levels.insert(p + margin);
    }
    std::vector<double> down_bounds = downs;
    down_bounds.push_back(table.max_deflation_kpa());
    std::sort(down_bounds.begin(), down_bounds.end(), std::greater<>());
    for (double p : downs) {
        auto next = std::upper_bound(down_bounds.begin(), down_bounds.end(), p, std::greater<>());
        double margin = std::min(1.0, 0.5 * (p - *next));
        levels.insert(p - margin);
    }
    return {levels.begin(), levels.end()};
}

struct SearchKey {
    std::uint32_t state;
    std::size_t level;
    bool operator<(const SearchKey& other) const {
        return state != other.state ? state < other.state : level < other.level;
    }
};

struct SearchCost {
    std::size_t events = 0;
    double swing = 0.0;
    bool operator<(const SearchCost& other) const {
        if (events != other.events) return events < other.events;
        return swing < other.swing;
    }
};

PlanResult plan_search(const ActuatorDesign& design, const KeypointTable& table,
                       const PanelState& from, const SimulateOptions& options,
                       const std::function<bool(const PanelState&, double)>& is_goal) {
    const std::vector<double> levels = planner_levels(design, table);
    const auto level_of = [&](double pressure) {
        auto it = std::lower_bound(levels.begin(), levels.end(), pressure);
        return static_cast<std::size_t>(it - levels.begin());
    };

    // All states over the design's depth classes, keyed by packed bits.
    std::vector<PanelState> states;
    PanelState proto = PanelState::all_s0(design);
    for (std::uint32_t mask = 0; mask < (1u << proto.deltas.size()); ++mask) {
        PanelState s = proto;
        for (std::size_t i = 0; i < s.bits.size(); ++i) s.bits[i] = mask & (1u << i);
        states.push_back(s);
    }

    struct QueueEntry {
        SearchCost cost;
        SearchKey key;
        bool operator>(const QueueEntry& other) const {
            if (other.cost < cost) return true;
            if (cost < other.cost) return false;
            return other.key < key;
        }
    };

    std::map<SearchKey, SearchCost> best;
    std::map<SearchKey, std::pair<SearchKey, double>> parent;  // predecessor + event target
    std::priority_queue<QueueEntry, std::vector<QueueEntry>, std::greater<QueueEntry>> queue;

    const SearchKey start{from.pack(), level_of(0.0)};
    best[start] = SearchCost{};
    queue.push({SearchCost{}, start});

    while (!queue.empty()) {
        auto [cost, key] = queue.top();
        queue.pop();
        auto found = best.find(key);
        if (found != best.end() && found->second < cost) continue;

        const PanelState& state = states[key.state];
        const double pressure = levels[key.level];
        if (is_goal(state, pressure)) {
            PlanResult result;
            result.reachable = true;
            result.final_state = state;
            result.final_pressure_kpa = pressure;
            SearchKey cursor = key;
            while (!(cursor.state == start.state && cursor.level == start.level)) {
                auto edge = parent.at(cursor);
                result.events.insert(result.events.begin(), PressureEvent{edge.second});
                cursor = edge.first;
            }
            return result;
        }

        for (std::size_t j = 0; j < levels.size(); ++j) {
            if (j == key.level) continue;
            PanelState next = state;
            sweep_state(next, table, pressure, levels[j]);
            SearchKey next_key{next.pack(), j};
            SearchCost next_cost{cost.events + 1, cost.swing + std::abs(levels[j] - pressure)};
            auto it = best.find(next_key);
            if (it == best.end() || next_cost < it->second) {
                best[next_key] = next_cost;
                parent[next_key] = {key, levels[j]};
                queue.push({next_cost, next_key});
            }
        }
    }

    (void)options;
    return {};  // unreachable
}

}  // namespace

PlanResult plan_path(const ActuatorDesign& design, const KeypointTable& table,
                     const PanelState& goal, const PanelState& from,
                     const SimulateOptions& options) {
    design.validate();
    check_state_matches(goal, design, "plan_path goal");
    check_state_matches(from, design, "plan_path start");

    const std::uint32_t goal_bits = goal.pack();
    PlanResult result = plan_search(design, table, from, options,
                                    [&](const PanelState& s, double) {
                                        return s.pack() == goal_bits;
                                    });
    if (!result.reachable) return result;

    auto trajectory = simulate_path(design, table, result.events, from, options);
    if (trajectory.back().state.pack() != goal_bits)
        throw std::logic_error("plan_path: replay did not end at the goal state");
    return result;
}

PlanResult plan_path_to_tip(const ActuatorDesign& design, const KeypointTable& table,
                            const Eigen::Vector3d& target_mm, double tolerance_mm,
                            const PanelState& from, const SimulateOptions& options) {
    design.validate();
    check_state_matches(from, design, "plan_path_to_tip start");

    const StateDiagram diagram = build_state_diagram(design, table);
    const DiagramNode* goal_node = nullptr;
    double best_distance = std::numeric_limits<double>::infinity();
    for (const DiagramNode& node : diagram.nodes) {
        ActuatorPose pose = pose_at(design, table, node.state, node.pressure_kpa, options);
        double distance = (pose.tip.d_mm - target_mm).norm();
        if (distance < best_distance) {
            best_distance = distance;
            goal_node = &node;
        }
    }
    if (!goal_node || best_distance > tolerance_mm) return {};

    const std::uint32_t goal_bits = goal_node->state.pack();
    const double goal_pressure = goal_node->pressure_kpa;
    PlanResult result = plan_search(design, table, from, options,
                                    [&](const PanelState& s, double pressure) {
                                        return s.pack() == goal_bits && pressure == goal_pressure;
                                    });
    if (!result.reachable) return result;

    auto trajectory = simulate_path(design, table, result.events, from, options);
    if (trajectory.back().state.pack() != goal_bits ||
        trajectory.back().pressure_kpa != goal_pressure)
        throw std::logic_error("plan_path_to_tip: replay did not end at the goal node");
    return result;
}

}  // namespace kresling
