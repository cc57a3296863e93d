#include "kresling/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace kresling {

std::string format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.10g", value);
    return buffer;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open file: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open file for writing: " + path);
    out << content;
    if (!out) throw IoError("failed to write file: " + path);
}

std::string trajectory_csv(const std::vector<TrajectorySample>& trajectory) {
    std::string out =
        "event_index,pressure_kpa,state_bits,d_x_mm,d_y_mm,d_z_mm,theta_act_deg,deployment\n";
    for (const TrajectorySample& sample : trajectory) {
        out += std::to_string(sample.event_index);
        out += ',';
        out += format_number(sample.pressure_kpa);
        out += ',';
        out += sample.state.to_string();
        out += ',';
        out += format_number(sample.pose.tip.d_mm.x());
        out += ',';
        out += format_number(sample.pose.tip.d_mm.y());
        out += ',';
        out += format_number(sample.pose.tip.d_mm.z());
        out += ',';
        out += format_number(sample.pose.tip.theta_act_deg);
        out += ',';
        out += format_number(sample.pose.tip.deployment);
        out += '\n';
    }
    return out;
}

namespace {

const char* sample_kind_name(SampleKind kind) {
    switch (kind) {
        case SampleKind::initial: return "initial";
        case SampleKind::pre_snap: return "pre_snap";
        case SampleKind::post_snap: return "post_snap";
        case SampleKind::extremum: return "extremum";
    }
    return "?";
}

nlohmann::ordered_json transform_json(const RigidTransform& transform) {
    nlohmann::ordered_json out;
    auto rows = nlohmann::ordered_json::array();
    for (int r = 0; r < 3; ++r)
        rows.push_back({transform.rotation(r, 0), transform.rotation(r, 1),
                        transform.rotation(r, 2)});
    out["rotation"] = rows;
    out["translation_mm"] = {transform.translation.x(), transform.translation.y(),
                             transform.translation.z()};
    return out;
}

nlohmann::ordered_json tip_json(const TipVector& tip) {
    nlohmann::ordered_json out;
    out["d_mm"] = {tip.d_mm.x(), tip.d_mm.y(), tip.d_mm.z()};
    out["theta_act_deg"] = tip.theta_act_deg;
    out["deployment"] = tip.deployment;
    return out;
}

}  // namespace

nlohmann::ordered_json trajectory_json(const ActuatorDesign& design, const KeypointTable& table,
                                       const std::vector<TrajectorySample>& trajectory) {
    nlohmann::ordered_json doc;
    doc["design"] = format_design(design);
    doc["calibration_checksum"] = table.checksum();
    auto samples = nlohmann::ordered_json::array();
    for (const TrajectorySample& sample : trajectory) {
        nlohmann::ordered_json entry;
        entry["event_index"] = sample.event_index;
        entry["pressure_kpa"] = sample.pressure_kpa;
        entry["state"] = sample.state.to_string();
        entry["kind"] = sample_kind_name(sample.kind);
        entry["tip"] = tip_json(sample.pose.tip);
        auto poses = nlohmann::ordered_json::array();
        poses.push_back(transform_json(RigidTransform::identity()));  // base cap
        for (const RigidTransform& pose : sample.pose.cap_poses)
            poses.push_back(transform_json(pose));
        entry["cap_poses"] = poses;
        samples.push_back(entry);
    }
    doc["samples"] = samples;
    return doc;
}

std::vector<RigidTransform> poses_from_trajectory_json(const nlohmann::json& doc,
                                                       std::size_t sample_index) {
    std::vector<RigidTransform> poses;
    const auto& entry = doc.at("samples").at(sample_index).at("cap_poses");
    for (const auto& pose_json : entry) {
        RigidTransform transform;
        const auto& rows = pose_json.at("rotation");
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) transform.rotation(r, c) = rows.at(r).at(c).get<double>();
        const auto& t = pose_json.at("translation_mm");
        transform.translation =
            Eigen::Vector3d(t.at(0).get<double>(), t.at(1).get<double>(), t.at(2).get<double>());
        poses.push_back(transform);
    }
    return poses;
}

std::string cloud_csv_header() {
    return "design_string,state_bits,keypoint_label,theta_act_deg,deployment\n";
}

void append_cloud_csv(std::string& out, const ActuatorDesign& design,
                      const ConfigurationCloud& cloud) {
    const std::string design_string = format_design(design);
    for (const CloudPoint& point : cloud.points) {
        out += design_string;
        out += ',';
        out += point.state.to_string();
        out += ',';
        out += point.label;
        out += ',';
        out += format_number(point.tip.theta_act_deg);
        out += ',';
        out += format_number(point.tip.deployment);
        out += '\n';
    }
}

nlohmann::ordered_json report_json(const SearchReport& report, const CostFunction& cost,
                                   const KeypointTable& table) {
    nlohmann::ordered_json doc;
    doc["method"] = report.method;
    doc["cost"] = std::string(cost_variant_name(cost.variant()));
    doc["config_set"] = cost.options().config_set == ConfigSet::stable_only
                            ? "stable_only"
                            : "stable_and_transitions";
    doc["monotone_pressure"] = cost.options().monotone_pressure;
    doc["calibration_checksum"] = table.checksum();
    if (report.method == "random") doc["seed"] = report.seed;
    doc["total_evaluations"] = report.total_evaluations;
    doc["wall_time_ms"] = report.wall_time_ms;
    auto curve = nlohmann::ordered_json::array();
    for (const SearchEntry& entry : report.curve) {
        nlohmann::ordered_json row;
        row["n_units"] = entry.n_units;
        row["design"] = format_design(entry.design);
        row["psi"] = entry.psi;
        row["evaluations"] = entry.evaluations;
        curve.push_back(row);
    }
    doc["curve"] = curve;
    nlohmann::ordered_json best;
    best["n_units"] = report.best.n_units;
    best["design"] = format_design(report.best.design);
    best["psi"] = report.best.psi;
    doc["best"] = best;
    return doc;
}

std::string report_curve_csv(const SearchReport& report) {
    std::string out = "n_units,psi,design_string\n";
    for (const SearchEntry& entry : report.curve) {
        out += std::to_string(entry.n_units);
        out += ',';
        out += format_number(entry.psi);
        out += ',';
        out += format_design(entry.design);
        out += '\n';
    }
    return out;
}

std::string events_csv(const std::vector<PressureEvent>& events) {
    std::string out = "event_index,target_kpa\n";
    for (std::size_t i = 0; i < events.size(); ++i) {
        out += std::to_string(i + 1);
        out += ',';
        out += format_number(events[i].target_kpa);
        out += '\n';
    }
    return out;
}

nlohmann::ordered_json plan_json(const PlanResult& plan) {
    nlohmann::ordered_json doc;
    doc["reachable"] = plan.reachable;
    if (plan.reachable) {
        auto events = nlohmann::ordered_json::array();
        for (const PressureEvent& event : plan.events) events.push_back(event.target_kpa);
        doc["events_kpa"] = events;
        doc["final_state"] = plan.final_state.to_string();
        doc["final_pressure_kpa"] = plan.final_pressure_kpa;
    }
    return doc;
}

std::vector<PressureEvent> events_from_json(const nlohmann::json& doc) {
    std::vector<PressureEvent> events;
    for (const auto& value : doc.at("events_kpa")) events.push_back({value.get<double>()});
    return events;
}

namespace {

[[noreturn]] void scenario_fail(const std::string& source, const std::string& message) {
    throw IoError("scenario " + source + ": " + message);
}

}  // namespace

Scenario scenario_from_json(const nlohmann::json& doc, const std::string& source_name) {
    if (!doc.is_object()) scenario_fail(source_name, "top level must be an object");
    for (const auto& item : doc.items()) {
        static const char* allowed[] = {"name",   "design", "events_kpa", "initial_state",
                                        "targets_mm", "method", "n_u", "n_s_max",
                                        "budget", "seed",   "cost",   "monotone_pressure",
                                        "calibration"};
        bool known = false;
        for (const char* key : allowed)
            if (item.key() == key) known = true;
        if (!known) scenario_fail(source_name, "unknown field '" + item.key() + "'");
    }

    Scenario scenario;
    scenario.name = doc.value("name", source_name);
    if (doc.contains("design")) scenario.design = doc.at("design").get<std::string>();
    if (doc.contains("events_kpa"))
        for (const auto& value : doc.at("events_kpa"))
            scenario.events_kpa.push_back(value.get<double>());
    if (doc.contains("initial_state"))
        scenario.initial_state = doc.at("initial_state").get<std::string>();
    if (doc.contains("targets_mm")) {
        for (const auto& target : doc.at("targets_mm")) {
            if (!target.is_array() || target.size() != 3)
                scenario_fail(source_name, "each target must be an [x, y, z] triple");
            scenario.targets_mm.emplace_back(target.at(0).get<double>(),
                                             target.at(1).get<double>(),
                                             target.at(2).get<double>());
        }
    }
    if (doc.contains("method")) {
        scenario.method = doc.at("method").get<std::string>();
        if (*scenario.method != "greedy" && *scenario.method != "exhaustive" &&
            *scenario.method != "random")
            scenario_fail(source_name, "method must be greedy, exhaustive, or random");
    }
    scenario.n_u = doc.value("n_u", scenario.n_u);
    scenario.n_s_max = doc.value("n_s_max", scenario.n_s_max);
    scenario.budget = doc.value("budget", scenario.budget);
    scenario.seed = doc.value("seed", scenario.seed);
    scenario.cost = doc.value("cost", scenario.cost);
    if (scenario.cost != "target_error" && scenario.cost != "max_bend" &&
        scenario.cost != "max_deployment")
        scenario_fail(source_name, "cost must be target_error, max_bend, or max_deployment");
    scenario.monotone_pressure = doc.value("monotone_pressure", scenario.monotone_pressure);
    if (doc.contains("calibration"))
        scenario.calibration_path = doc.at("calibration").get<std::string>();

    const bool has_simulation = scenario.design.has_value();
    const bool has_task = !scenario.targets_mm.empty() || scenario.method.has_value();
    if (!has_simulation && !has_task)
        scenario_fail(source_name, "must contain a design or an optimization task");
    return scenario;
}

Scenario load_scenario(const std::string& path) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw IoError("scenario " + path + ": invalid JSON: " + e.what());
    }
    return scenario_from_json(doc, path);
}

}  // namespace kresling
