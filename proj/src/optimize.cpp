#include "kresling/optimize.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

namespace kresling {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();

bool point_selected(const CloudPoint& point, ConfigSet set) {
    return set == ConfigSet::stable_and_transitions || point.provenance == NodeRole::stable;
}

/// Nodes visited by one monotone decreasing-pressure sweep after priming
/// the first `popped_prefix` depth classes (ascending depth = ascending
/// snap-out threshold), in descending pressure order.
std::vector<const CloudPoint*> monotone_walk(const ConfigurationCloud& cloud,
                                             const std::vector<int>& deltas,
                                             std::size_t popped_prefix, ConfigSet set) {
    std::uint32_t mask = 0;
    for (std::size_t i = 0; i < popped_prefix; ++i) mask |= 1u << i;

    auto find_point = [&](std::uint32_t state_mask, NodeRole role,
                          bool upper) -> const CloudPoint* {
        for (const CloudPoint& point : cloud.points) {
            if (point.state.pack() != state_mask) continue;
            if (role == NodeRole::stable) {
                if (point.provenance == NodeRole::stable) return &point;
            } else if (point.provenance != NodeRole::stable) {
                // Branch endpoints sit strictly above zero (p_plus or max
                // inflation) or strictly below (p_minus or max deflation).
                if ((point.pressure_kpa > 0) == upper) return &point;
            }
        }
        return nullptr;
    };

    std::vector<const CloudPoint*> walk;
    auto push = [&](const CloudPoint* point) {
        if (point && point_selected(*point, set)) walk.push_back(point);
    };

    push(find_point(mask, NodeRole::transition, /*upper=*/true));
    push(find_point(mask, NodeRole::stable, false));

    std::uint32_t current = mask;
    for (;;) {
        push(find_point(current, NodeRole::transition, /*upper=*/false));
        if (current == 0) break;
        // Deflating snaps back the popped class with the highest p_minus,
        // i.e. the smallest popped depth under the ordering invariant.
        std::size_t lowest = 0;
        while (!(current & (1u << lowest))) ++lowest;
        current &= ~(1u << lowest);
        (void)deltas;
    }
    return walk;
}

double monotone_target_error(const ConfigurationCloud& cloud, const std::vector<int>& deltas,
                             const TargetSet& targets, ConfigSet set) {
    const std::size_t n_targets = targets.targets_mm.size();
    double best = kInfinity;
    for (std::size_t popped = 0; popped <= deltas.size(); ++popped) {
        const auto walk = monotone_walk(cloud, deltas, popped, set);
        if (walk.empty()) continue;
        // DP over ordered assignments: target m may use any walk position at
        // or after target m-1's.
        std::vector<double> prev(walk.size(), 0.0);
        std::vector<double> row(walk.size(), 0.0);
        for (std::size_t m = 0; m < n_targets; ++m) {
            for (std::size_t j = 0; j < walk.size(); ++j) {
                const double d = (walk[j]->tip.d_mm - targets.targets_mm[m]).norm();
                row[j] = prev[j] + d;
                if (j > 0) row[j] = std::min(row[j], row[j - 1]);
            }
            std::swap(prev, row);
        }
        best = std::min(best, prev.back());
    }
    return best;
}

}  // namespace

void TargetSet::validate() const {
    if (targets_mm.empty()) throw std::invalid_argument("target set must be non-empty");
    for (const Eigen::Vector3d& t : targets_mm)
        if (!t.allFinite()) throw std::invalid_argument("targets must be finite");
}

std::string_view cost_variant_name(CostVariant variant) {
    switch (variant) {
        case CostVariant::target_error: return "target_error";
        case CostVariant::max_bend: return "max_bend";
        case CostVariant::max_deployment: return "max_deployment";
    }
    return "?";
}

CostFunction CostFunction::target_error(TargetSet targets, CostOptions options) {
    targets.validate();
    CostFunction cost(CostVariant::target_error, options);
    cost.targets_ = std::move(targets);
    return cost;
}

CostFunction CostFunction::max_bend(CostOptions options) {
    if (options.monotone_pressure)
        throw std::invalid_argument("monotone_pressure only applies to target_error");
    return CostFunction(CostVariant::max_bend, options);
}

CostFunction CostFunction::max_deployment(CostOptions options) {
    if (options.monotone_pressure)
        throw std::invalid_argument("monotone_pressure only applies to target_error");
    return CostFunction(CostVariant::max_deployment, options);
}

const TargetSet& CostFunction::targets() const {
    if (variant_ != CostVariant::target_error)
        throw std::logic_error("only target_error carries a target set");
    return targets_;
}

double CostFunction::evaluate(const ActuatorDesign& design, const KeypointTable& table) const {
    const ConfigurationCloud cloud = configuration_cloud(design, table, options_.model);

    switch (variant_) {
        case CostVariant::target_error: {
            const double h = table.constants().h_mm;
            const std::size_t n_targets = targets_.targets_mm.size();
            if (options_.monotone_pressure) {
                const double sum = monotone_target_error(cloud, design.unique_deltas(),
                                                         targets_, options_.config_set);
                return sum / (static_cast<double>(n_targets) * h);
            }
            double sum = 0.0;
            for (const Eigen::Vector3d& target : targets_.targets_mm) {
                double nearest = kInfinity;
                for (const CloudPoint& point : cloud.points) {
                    if (!point_selected(point, options_.config_set)) continue;
                    nearest = std::min(nearest, (point.tip.d_mm - target).norm());
                }
                if (!std::isfinite(nearest))
                    throw std::logic_error("target_error: empty configuration set");
                sum += nearest;
            }
            return sum / (static_cast<double>(n_targets) * h);
        }
        case CostVariant::max_bend: {
            double best = -kInfinity;
            for (const CloudPoint& point : cloud.points)
                if (point_selected(point, options_.config_set))
                    best = std::max(best, point.tip.theta_act_deg);
            return -best;
        }
        case CostVariant::max_deployment: {
            double best = -kInfinity;
            for (const CloudPoint& point : cloud.points)
                if (point_selected(point, options_.config_set))
                    best = std::max(best, point.tip.deployment);
            return -best;
        }
    }
    throw std::logic_error("unknown cost variant");
}

namespace {

struct ScanBest {
    double psi = kInfinity;
    std::uint64_t index = 0;
    bool valid = false;
};

/// Evaluates psi for every candidate index in [0, count) and returns the
/// strict minimum; ties keep the lowest index. Chunks are merged in index
/// order, so the result is independent of the number of jobs.
template <typename Eval>
ScanBest scan_candidates(std::uint64_t count, int jobs, const Eval& eval) {
    jobs = std::max(1, jobs);
    const std::uint64_t chunk_count = std::min<std::uint64_t>(jobs, std::max<std::uint64_t>(count, 1));
    std::vector<ScanBest> chunk_best(chunk_count);

    auto run_chunk = [&](std::uint64_t chunk) {
        const std::uint64_t lo = count * chunk / chunk_count;
        const std::uint64_t hi = count * (chunk + 1) / chunk_count;
        ScanBest best;
        for (std::uint64_t index = lo; index < hi; ++index) {
            const double psi = eval(index);
            if (!best.valid || psi < best.psi) best = {psi, index, true};
        }
        chunk_best[chunk] = best;
    };

    if (chunk_count == 1) {
        run_chunk(0);
    } else {
        std::vector<std::thread> threads;
        for (std::uint64_t chunk = 1; chunk < chunk_count; ++chunk)
            threads.emplace_back(run_chunk, chunk);
        run_chunk(0);
        for (std::thread& thread : threads) thread.join();
    }

    ScanBest best;
    for (const ScanBest& candidate : chunk_best)
        if (candidate.valid && (!best.valid || candidate.psi < best.psi)) best = candidate;
    return best;
}

SearchEntry pick_global_best(const std::vector<SearchEntry>& curve) {
    SearchEntry best = curve.front();
    for (const SearchEntry& entry : curve)
        if (entry.psi < best.psi) best = entry;
    return best;
}

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint64_t uniform_below(std::uint64_t& state, std::uint64_t bound) {
    // Rejection sampling keeps the draw unbiased.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    for (;;) {
        const std::uint64_t draw = splitmix64(state);
        if (draw < limit) return draw % bound;
    }
}

}  // namespace

SearchReport greedy_search(const KeypointTable& table, const CostFunction& cost, int n_u,
                           int n_s_max, int jobs) {
    if (n_u < 1 || n_u > 3)
        throw std::invalid_argument("greedy_search: super-cell size must be 1, 2, or 3");
    if (n_s_max < 1 ||
        static_cast<std::size_t>(n_u) * n_s_max > ActuatorDesign::kDefaultMaxUnits)
        throw std::invalid_argument("greedy_search: n_u * n_s_max must be in 1..15");

    const auto start_time = std::chrono::steady_clock::now();
    const std::uint64_t cell_count = design_space_size(n_u);

    SearchReport report;
    report.method = "greedy";

    ActuatorDesign prefix;
    for (int iteration = 1; iteration <= n_s_max; ++iteration) {
        auto eval = [&](std::uint64_t index) {
            ActuatorDesign candidate = prefix;
            const ActuatorDesign cell = design_at(n_u, index);
            candidate.units.insert(candidate.units.end(), cell.units.begin(), cell.units.end());
            return cost.evaluate(candidate, table);
        };
        const ScanBest best = scan_candidates(cell_count, jobs, eval);

        const ActuatorDesign cell = design_at(n_u, best.index);
        prefix.units.insert(prefix.units.end(), cell.units.begin(), cell.units.end());
        report.curve.push_back({prefix.units.size(), prefix, best.psi, cell_count});
        report.total_evaluations += cell_count;
    }

    report.best = pick_global_best(report.curve);
    report.wall_time_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start_time)
                              .count();
    return report;
}

SearchReport exhaustive_search(std::size_t n, const KeypointTable& table,
                               const CostFunction& cost, int jobs, bool force) {
    if (n < 1) throw std::invalid_argument("exhaustive_search: n must be >= 1");
    if (n > 4 && !force)
        throw std::invalid_argument("exhaustive_search: n=" + std::to_string(n) +
                                    " exceeds the guard (n <= 4); pass force to override");

    const auto start_time = std::chrono::steady_clock::now();
    const std::uint64_t count = design_space_size(n);
    const ScanBest best = scan_candidates(count, jobs, [&](std::uint64_t index) {
        return cost.evaluate(design_at(n, index), table);
    });

    SearchReport report;
    report.method = "exhaustive";
    report.curve.push_back({n, design_at(n, best.index), best.psi, count});
    report.best = report.curve.front();
    report.total_evaluations = count;
    report.wall_time_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start_time)
                              .count();
    return report;
}

SearchReport random_search(std::size_t n, const KeypointTable& table, const CostFunction& cost,
                           std::uint64_t budget, std::uint64_t seed, int jobs) {
    if (n < 1) throw std::invalid_argument("random_search: n must be >= 1");
    if (budget < 1) throw std::invalid_argument("random_search: budget must be >= 1");

    const std::uint64_t count = design_space_size(n);
    if (budget >= count) {
        // The budget covers the whole space; enumerate it instead.
        SearchReport report = exhaustive_search(n, table, cost, jobs, /*force=*/true);
        report.method = "random";
        report.seed = seed;
        return report;
    }

    const auto start_time = std::chrono::steady_clock::now();
    std::uint64_t rng_state = seed;
    std::vector<std::uint64_t> draws(budget);
    for (std::uint64_t& draw : draws) draw = uniform_below(rng_state, count);

    const ScanBest best = scan_candidates(budget, jobs, [&](std::uint64_t i) {
        return cost.evaluate(design_at(n, draws[i]), table);
    });

    SearchReport report;
    report.method = "random";
    report.seed = seed;
    report.curve.push_back({n, design_at(n, draws[best.index]), best.psi, budget});
    report.best = report.curve.front();
    report.total_evaluations = budget;
    report.wall_time_ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - start_time)
                              .count();
    return report;
}

}  // namespace kresling
