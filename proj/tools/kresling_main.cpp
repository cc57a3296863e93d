#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "kresling/cloud.hpp"
#include "kresling/io.hpp"
#include "kresling/optimize.hpp"
#include "kresling/state_machine.hpp"

namespace {

using namespace kresling;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct CommonOptions {
    std::string calibration_path;
    std::string format = "csv";
    int jobs = 1;
    bool clamp = false;
    bool twist_first = false;
};

void add_common(CLI::App* cmd, CommonOptions& options) {
    cmd->add_option("--calibration", options.calibration_path,
                    "Calibration file (default: embedded table)");
    cmd->add_option("--format", options.format, "Output format: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    cmd->add_option("--jobs", options.jobs, "Parallel evaluation threads")
        ->check(CLI::PositiveNumber);
    cmd->add_flag("--clamp", options.clamp,
                  "Clamp pressures to the calibration range instead of failing");
    cmd->add_flag("--twist-first", options.twist_first,
                  "Alternate unit transform order (twist before tilt), for model fits");
}

KeypointTable load_table(const CommonOptions& options) {
    if (options.calibration_path.empty()) return KeypointTable::default_table();
    return KeypointTable::load_file(options.calibration_path);
}

SimulateOptions model_options(const CommonOptions& options) {
    SimulateOptions model;
    model.clamp = options.clamp ? Clamp::clamp : Clamp::strict;
    model.order = options.twist_first ? TransformOrder::twist_then_tilt
                                      : TransformOrder::tilt_then_twist;
    return model;
}

std::vector<PressureEvent> parse_event_list(const std::vector<double>& values) {
    std::vector<PressureEvent> events;
    for (double value : values) events.push_back({value});
    return events;
}

CostFunction build_cost(const std::string& variant, const std::vector<Eigen::Vector3d>& targets,
                        bool stable_only, bool monotone, const SimulateOptions& model) {
    CostOptions options;
    options.config_set = stable_only ? ConfigSet::stable_only : ConfigSet::stable_and_transitions;
    options.monotone_pressure = monotone;
    options.model = model;
    if (variant == "target_error") {
        if (targets.empty())
            throw std::invalid_argument("target_error requires a target set (--targets)");
        return CostFunction::target_error(TargetSet{targets}, options);
    }
    if (variant == "max_bend") return CostFunction::max_bend(options);
    if (variant == "max_deployment") return CostFunction::max_deployment(options);
    throw std::invalid_argument("unknown cost variant: " + variant);
}

// --- enumerate ---

int cmd_enumerate(std::size_t n, const std::optional<std::string>& cost_name,
                  const std::string& targets_path, bool stable_only, bool force,
                  const std::string& output, const CommonOptions& common) {
    const KeypointTable table = load_table(common);
    const SimulateOptions model = model_options(common);

    std::string out;
    nlohmann::ordered_json json_rows = nlohmann::ordered_json::array();
    const bool json = common.format == "json";

    if (cost_name) {
        std::vector<Eigen::Vector3d> targets;
        if (!targets_path.empty()) targets = load_scenario(targets_path).targets_mm;
        const CostFunction cost = build_cost(*cost_name, targets, stable_only, false, model);
        if (!json) out = "design_string,psi\n";
        for_each_design(
            n,
            [&](const ActuatorDesign& design) {
                const double psi = cost.evaluate(design, table);
                if (json) {
                    json_rows.push_back({{"design", format_design(design)}, {"psi", psi}});
                } else {
                    out += format_design(design);
                    out += ',';
                    out += format_number(psi);
                    out += '\n';
                }
            },
            force);
    } else {
        if (!json) out = cloud_csv_header();
        for_each_design(
            n,
            [&](const ActuatorDesign& design) {
                const ConfigurationCloud cloud = configuration_cloud(design, table, model);
                if (json) {
                    for (const CloudPoint& point : cloud.points)
                        json_rows.push_back({{"design", format_design(design)},
                                             {"state", point.state.to_string()},
                                             {"keypoint_label", point.label},
                                             {"theta_act_deg", point.tip.theta_act_deg},
                                             {"deployment", point.tip.deployment}});
                } else {
                    append_cloud_csv(out, design, cloud);
                }
            },
            force);
    }

    const std::string content = json ? json_rows.dump(2) + "\n" : out;
    if (output.empty()) {
        std::fputs(content.c_str(), stdout);
    } else {
        write_text_file(output, content);
        std::printf("wrote %s\n", output.c_str());
    }
    return kExitOk;
}

// --- simulate ---

int cmd_simulate(const std::string& design_text, const std::vector<double>& event_values,
                 const std::string& initial_text, const std::string& scenario_path,
                 const std::string& output, const std::string& json_output,
                 const CommonOptions& common) {
    CommonOptions effective = common;
    std::string design_string = design_text;
    std::vector<double> events = event_values;
    std::string initial = initial_text;

    if (!scenario_path.empty()) {
        const Scenario scenario = load_scenario(scenario_path);
        if (!scenario.design)
            throw std::invalid_argument("scenario has no design to simulate");
        design_string = *scenario.design;
        events = scenario.events_kpa;
        if (scenario.initial_state) initial = *scenario.initial_state;
        if (scenario.calibration_path && effective.calibration_path.empty())
            effective.calibration_path = *scenario.calibration_path;
    }
    if (design_string.empty()) throw std::invalid_argument("no design given (-d or --scenario)");

    const KeypointTable table = load_table(effective);
    const ActuatorDesign design = parse_design(design_string);
    const PanelState start = initial.empty() ? PanelState::all_s0(design)
                                             : PanelState::from_string(initial, design);

    const auto trajectory = simulate_path(design, table, parse_event_list(events), start,
                                          model_options(effective));

    if (!output.empty()) write_text_file(output, trajectory_csv(trajectory));
    if (!json_output.empty())
        write_text_file(json_output, trajectory_json(design, table, trajectory).dump(2) + "\n");
    if (output.empty() && json_output.empty() && common.format == "csv")
        std::fputs(trajectory_csv(trajectory).c_str(), stdout);

    const TrajectorySample& last = trajectory.back();
    std::printf("final state %s at %s kPa; tip d = (%s, %s, %s) mm, theta_act = %s deg, "
                "deployment = %s\n",
                last.state.to_string().c_str(), format_number(last.pressure_kpa).c_str(),
                format_number(last.pose.tip.d_mm.x()).c_str(),
                format_number(last.pose.tip.d_mm.y()).c_str(),
                format_number(last.pose.tip.d_mm.z()).c_str(),
                format_number(last.pose.tip.theta_act_deg).c_str(),
                format_number(last.pose.tip.deployment).c_str());
    return kExitOk;
}

// --- plan ---

int cmd_plan(const std::string& design_text, const std::string& goal_text,
             const std::vector<double>& target_xyz, double tolerance_mm,
             const std::string& from_text, const std::string& json_output,
             const CommonOptions& common) {
    const KeypointTable table = load_table(common);
    const ActuatorDesign design = parse_design(design_text);
    const PanelState from = from_text.empty() ? PanelState::all_s0(design)
                                              : PanelState::from_string(from_text, design);
    const SimulateOptions model = model_options(common);

    PlanResult plan;
    if (!goal_text.empty()) {
        plan = plan_path(design, table, PanelState::from_string(goal_text, design), from, model);
    } else if (target_xyz.size() == 3) {
        plan = plan_path_to_tip(design, table,
                                Eigen::Vector3d(target_xyz[0], target_xyz[1], target_xyz[2]),
                                tolerance_mm, from, model);
    } else {
        throw std::invalid_argument("plan needs --goal or --target x,y,z");
    }

    if (!json_output.empty()) write_text_file(json_output, plan_json(plan).dump(2) + "\n");

    if (!plan.reachable) {
        std::printf("unreachable\n");
        return kExitRuntime;
    }
    if (plan.events.empty()) {
        std::printf("already at goal; no pressure events needed\n");
    } else {
        for (std::size_t i = 0; i < plan.events.size(); ++i)
            std::printf("%zu. drive pressure to %s kPa\n", i + 1,
                        format_number(plan.events[i].target_kpa).c_str());
    }
    std::printf("final state %s at %s kPa\n", plan.final_state.to_string().c_str(),
                format_number(plan.final_pressure_kpa).c_str());
    return kExitOk;
}

// --- optimize ---

int cmd_optimize(const std::string& targets_path, const std::string& scenario_path,
                 std::string method, int n_u, int n_s_max, std::size_t n,
                 std::uint64_t budget, std::uint64_t seed, std::string cost_name,
                 bool stable_only, bool monotone, bool force, const std::string& output,
                 const std::string& csv_output, const CommonOptions& common) {
    CommonOptions effective = common;
    std::vector<Eigen::Vector3d> targets;
    if (!scenario_path.empty()) {
        const Scenario scenario = load_scenario(scenario_path);
        targets = scenario.targets_mm;
        if (scenario.method) method = *scenario.method;
        n_u = scenario.n_u;
        n_s_max = scenario.n_s_max;
        budget = scenario.budget;
        seed = scenario.seed;
        cost_name = scenario.cost;
        monotone = scenario.monotone_pressure;
        if (scenario.calibration_path && effective.calibration_path.empty())
            effective.calibration_path = *scenario.calibration_path;
    } else if (!targets_path.empty()) {
        targets = load_scenario(targets_path).targets_mm;
    }

    const KeypointTable table = load_table(effective);
    const CostFunction cost =
        build_cost(cost_name, targets, stable_only, monotone, model_options(effective));

    SearchReport report;
    if (method == "greedy") {
        report = greedy_search(table, cost, n_u, n_s_max, effective.jobs);
    } else if (method == "exhaustive") {
        report = exhaustive_search(n, table, cost, effective.jobs, force);
    } else if (method == "random") {
        report = random_search(n, table, cost, budget, seed, effective.jobs);
    } else {
        throw std::invalid_argument("method must be greedy, exhaustive, or random");
    }

    if (!output.empty())
        write_text_file(output, report_json(report, cost, table).dump(2) + "\n");
    if (!csv_output.empty()) write_text_file(csv_output, report_curve_csv(report));

    std::printf("%s: best design %s with psi = %s (%llu evaluations, %.1f ms)\n",
                report.method.c_str(), format_design(report.best.design).c_str(),
                format_number(report.best.psi).c_str(),
                static_cast<unsigned long long>(report.total_evaluations),
                report.wall_time_ms);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design and simulation toolkit for multi-modal Kresling fluidic actuators"};
    app.require_subcommand(1);

    CommonOptions common;

    // enumerate
    auto* enumerate = app.add_subcommand(
        "enumerate", "Write configuration clouds (or a cost table) for all designs of length n");
    std::size_t enum_n = 1;
    std::optional<std::string> enum_cost;
    std::string enum_targets, enum_output;
    bool enum_force = false, enum_stable_only = false;
    enumerate->add_option("-n,--units", enum_n, "Units per design")->required();
    enumerate->add_option("--cost", enum_cost,
                          "Emit one psi row per design instead of clouds "
                          "(target_error, max_bend, max_deployment)");
    enumerate->add_option("--targets", enum_targets, "Targets file for --cost target_error");
    enumerate->add_flag("--stable-only", enum_stable_only,
                        "Restrict costs to the stable zero-pressure states");
    enumerate->add_flag("--force", enum_force, "Lift the enumeration size guard");
    enumerate->add_option("-o,--output", enum_output, "Output path (default: stdout)");
    add_common(enumerate, common);

    // simulate
    auto* simulate = app.add_subcommand("simulate", "Replay a pressure-event history");
    std::string sim_design, sim_initial, sim_scenario, sim_output, sim_json;
    std::vector<double> sim_events;
    simulate->add_option("-d,--design", sim_design, "Design string, e.g. \"[2//3;4//6]\"");
    simulate->add_option("-e,--events", sim_events, "Pressure extrema in kPa")
        ->delimiter(',');
    simulate->add_option("--initial", sim_initial, "Initial panel state (default all-s0)");
    simulate->add_option("--scenario", sim_scenario, "Scenario file with design and events");
    simulate->add_option("-o,--output", sim_output, "Trajectory CSV path");
    simulate->add_option("--json", sim_json, "Trajectory JSON path (with per-cap poses)");
    add_common(simulate, common);

    // plan
    auto* plan = app.add_subcommand("plan", "Find the shortest pressure-event plan to a goal");
    std::string plan_design, plan_goal, plan_from, plan_json_path;
    std::vector<double> plan_target;
    double plan_tolerance = 1.0;
    plan->add_option("-d,--design", plan_design, "Design string")->required();
    plan->add_option("--goal", plan_goal, "Goal panel state, e.g. s01");
    plan->add_option("--target", plan_target, "Goal tip point x,y,z in mm")->delimiter(',');
    plan->add_option("--tolerance", plan_tolerance, "Tip match tolerance in mm");
    plan->add_option("--from", plan_from, "Starting panel state (default all-s0)");
    plan->add_option("--json", plan_json_path, "Plan JSON path");
    add_common(plan, common);

    // optimize
    auto* optimize = app.add_subcommand("optimize", "Inverse-design search over the design space");
    std::string opt_targets, opt_scenario, opt_method = "greedy", opt_cost = "target_error";
    std::string opt_output, opt_csv;
    int opt_n_u = 3, opt_n_s_max = 5;
    std::size_t opt_n = 3;
    std::uint64_t opt_budget = 10000, opt_seed = 0;
    bool opt_stable_only = false, opt_monotone = false, opt_force = false;
    optimize->add_option("--targets", opt_targets, "Targets file (JSON with targets_mm)");
    optimize->add_option("--scenario", opt_scenario, "Scenario file describing the task");
    optimize->add_option("--method", opt_method, "greedy, exhaustive, or random")
        ->check(CLI::IsMember({"greedy", "exhaustive", "random"}));
    optimize->add_option("--n-u", opt_n_u, "Units per super-cell (greedy)");
    optimize->add_option("--n-s-max", opt_n_s_max, "Maximum super-cells (greedy)");
    optimize->add_option("-n,--units", opt_n, "Design length (exhaustive/random)");
    optimize->add_option("--budget", opt_budget, "Evaluation budget (random)");
    optimize->add_option("--seed", opt_seed, "RNG seed (random)");
    optimize->add_option("--cost", opt_cost, "Cost variant")
        ->check(CLI::IsMember({"target_error", "max_bend", "max_deployment"}));
    optimize->add_flag("--stable-only", opt_stable_only,
                       "Restrict the cost to stable zero-pressure states");
    optimize->add_flag("--monotone", opt_monotone,
                       "Require targets reached in order on one decreasing-pressure sweep");
    optimize->add_flag("--force", opt_force, "Lift the exhaustive search guard");
    optimize->add_option("-o,--output", opt_output, "Report JSON path");
    optimize->add_option("--csv", opt_csv, "Psi-vs-n curve CSV path");
    add_common(optimize, common);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (enumerate->parsed())
            return cmd_enumerate(enum_n, enum_cost, enum_targets, enum_stable_only, enum_force,
                                 enum_output, common);
        if (simulate->parsed())
            return cmd_simulate(sim_design, sim_events, sim_initial, sim_scenario, sim_output,
                                sim_json, common);
        if (plan->parsed())
            return cmd_plan(plan_design, plan_goal, plan_target, plan_tolerance, plan_from,
                            plan_json_path, common);
        if (optimize->parsed())
            return cmd_optimize(opt_targets, opt_scenario, opt_method, opt_n_u, opt_n_s_max,
                                opt_n, opt_budget, opt_seed, opt_cost, opt_stable_only,
                                opt_monotone, opt_force, opt_output, opt_csv, common);
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    } catch (const DesignParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const CalibrationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitRuntime;
    }
    return kExitUsage;
}
