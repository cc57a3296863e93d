#pragma once

#include <string>
#include <vector>

#include "kresling/state_machine.hpp"

namespace kresling {

/// One reachable tip configuration of a design: a diagram node with its
/// evaluated pose summary and provenance labels.
struct CloudPoint {
    TipVector tip;
    PanelState state;
    double pressure_kpa = 0.0;
    NodeRole provenance = NodeRole::stable;
    std::string label;
    PressureRegime regime = PressureRegime::zero;
};

/// Every configuration the actuator supports: one point per (state,
/// pressure keypoint) node of its state diagram.
struct ConfigurationCloud {
    std::vector<CloudPoint> points;
};

ConfigurationCloud configuration_cloud(const ActuatorDesign& design, const KeypointTable& table,
                                       const SimulateOptions& options = {});

}  // namespace kresling
