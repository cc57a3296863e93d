#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "kresling/cloud.hpp"
#include "kresling/optimize.hpp"
#include "kresling/state_machine.hpp"

namespace kresling {

/// Shortest round-trip decimal formatting, stable across runs.
std::string format_number(double value);

std::string read_text_file(const std::string& path);   // throws IoError
void write_text_file(const std::string& path, const std::string& content);

// --- trajectory ---

/// Columns: event_index, pressure_kpa, state_bits, d_x_mm, d_y_mm, d_z_mm,
/// theta_act_deg, deployment.
std::string trajectory_csv(const std::vector<TrajectorySample>& trajectory);

/// JSON variant carrying per-cap poses for downstream visualization.
nlohmann::ordered_json trajectory_json(const ActuatorDesign& design, const KeypointTable& table,
                                       const std::vector<TrajectorySample>& trajectory);

/// Reads back the poses written by trajectory_json (round-trip check).
std::vector<RigidTransform> poses_from_trajectory_json(const nlohmann::json& doc,
                                                       std::size_t sample_index);

// --- configuration clouds ---

std::string cloud_csv_header();

/// Columns: design_string, state_bits, keypoint_label, theta_act_deg, deployment.
void append_cloud_csv(std::string& out, const ActuatorDesign& design,
                      const ConfigurationCloud& cloud);

// --- search reports ---

nlohmann::ordered_json report_json(const SearchReport& report, const CostFunction& cost,
                                   const KeypointTable& table);

/// Columns: n_units, psi, design_string (one row per visited length).
std::string report_curve_csv(const SearchReport& report);

// --- events / plans ---

std::string events_csv(const std::vector<PressureEvent>& events);
nlohmann::ordered_json plan_json(const PlanResult& plan);
std::vector<PressureEvent> events_from_json(const nlohmann::json& doc);

// --- scenario files ---

/// Declarative description of one run: a design with a pressure history, or
/// an inverse-design task over a target set.
struct Scenario {
    std::string name;
    std::optional<std::string> design;           // simulate/plan scenarios
    std::vector<double> events_kpa;              // simulate scenarios
    std::optional<std::string> initial_state;    // default: all-s0
    std::vector<Eigen::Vector3d> targets_mm;     // optimize scenarios
    std::optional<std::string> method;           // greedy | exhaustive | random
    int n_u = 3;
    int n_s_max = 5;
    std::uint64_t budget = 10000;
    std::uint64_t seed = 0;
    std::string cost = "target_error";
    bool monotone_pressure = false;
    std::optional<std::string> calibration_path;
};

Scenario load_scenario(const std::string& path);
Scenario scenario_from_json(const nlohmann::json& doc, const std::string& source_name);

}  // namespace kresling
