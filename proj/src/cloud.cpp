#include "kresling/cloud.hpp"

namespace kresling {

ConfigurationCloud configuration_cloud(const ActuatorDesign& design, const KeypointTable& table,
                                       const SimulateOptions& options) {
    const StateDiagram diagram = build_state_diagram(design, table);
    ConfigurationCloud cloud;
    cloud.points.reserve(diagram.nodes.size());
    for (const DiagramNode& node : diagram.nodes) {
        ActuatorPose pose = pose_at(design, table, node.state, node.pressure_kpa, options);
        cloud.points.push_back({pose.tip, node.state, node.pressure_kpa, node.role, node.label,
                                regime_of(node.pressure_kpa)});
    }
    return cloud;
}

}  // namespace kresling
