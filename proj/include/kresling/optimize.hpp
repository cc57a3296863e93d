#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "kresling/cloud.hpp"

namespace kresling {

/// Target points, expressed in the base-cap frame with +z along the
/// undeformed actuator axis (mm).
struct TargetSet {
    std::vector<Eigen::Vector3d> targets_mm;

    void validate() const;  // non-empty, all finite
};

enum class CostVariant : std::uint8_t { target_error, max_bend, max_deployment };

std::string_view cost_variant_name(CostVariant variant);

/// Which reachable configurations the cost may match against.
enum class ConfigSet : std::uint8_t { stable_only, stable_and_transitions };

struct CostOptions {
    ConfigSet config_set = ConfigSet::stable_and_transitions;

    /// target_error only: targets must be matched, in their given order, by
    /// configurations lying on a single monotone decreasing-pressure sweep
    /// (after one priming inflation).
    bool monotone_pressure = false;

    SimulateOptions model;
};

/// Scalar design cost. target_error is the normalized mean distance from
/// each target to the nearest reachable configuration; the max_* variants
/// return the negated best bend / deployment so that lower is always better.
class CostFunction {
public:
    static CostFunction target_error(TargetSet targets, CostOptions options = {});
    static CostFunction max_bend(CostOptions options = {});
    static CostFunction max_deployment(CostOptions options = {});

    double evaluate(const ActuatorDesign& design, const KeypointTable& table) const;

    CostVariant variant() const { return variant_; }
    const CostOptions& options() const { return options_; }
    const TargetSet& targets() const;

private:
    CostFunction(CostVariant variant, CostOptions options) : variant_(variant), options_(options) {}

    CostVariant variant_;
    CostOptions options_;
    TargetSet targets_;
};

struct SearchEntry {
    std::size_t n_units = 0;
    ActuatorDesign design;
    double psi = 0.0;
    std::uint64_t evaluations = 0;
};

struct SearchReport {
    std::string method;
    std::vector<SearchEntry> curve;  // one entry per visited length
    SearchEntry best;                // global best over all visited lengths
    std::uint64_t total_evaluations = 0;
    double wall_time_ms = 0.0;
    std::uint64_t seed = 0;          // random method only
};

/// Best-first greedy over super-cells: iteration n_s scans all 38^{n_u}
/// cells appended to the stored prefix and keeps the psi-minimizing one
/// (ties resolve to the lexicographically smallest design string).
/// Requires n_u in {1,2,3} and n_u * n_s_max <= 15.
SearchReport greedy_search(const KeypointTable& table, const CostFunction& cost, int n_u,
                           int n_s_max, int jobs = 1);

/// Exact global minimum over all 38^n designs. Guarded at n <= 4 unless
/// force is set.
SearchReport exhaustive_search(std::size_t n, const KeypointTable& table,
                               const CostFunction& cost, int jobs = 1, bool force = false);

/// Best of `budget` uniform random designs, reproducible given the seed.
/// Budgets at or above 38^n fall back to full enumeration.
SearchReport random_search(std::size_t n, const KeypointTable& table, const CostFunction& cost,
                           std::uint64_t budget, std::uint64_t seed, int jobs = 1);

}  // namespace kresling
