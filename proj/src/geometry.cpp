#include "kresling/geometry.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace kresling {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }
double rad_to_deg(double rad) { return rad * 180.0 / std::numbers::pi; }

RigidTransform RigidTransform::rotation_z(double angle_deg) {
    RigidTransform t;
    t.rotation = Eigen::AngleAxisd(deg_to_rad(angle_deg), Eigen::Vector3d::UnitZ())
                     .toRotationMatrix();
    return t;
}

RigidTransform RigidTransform::operator*(const RigidTransform& other) const {
    RigidTransform out;
    out.rotation = rotation * other.rotation;
    out.translation = translation + rotation * other.translation;
    return out;
}

Eigen::Vector3d RigidTransform::apply(const Eigen::Vector3d& point) const {
    return rotation * point + translation;
}

bool RigidTransform::is_rigid(double tol) const {
    Eigen::Matrix3d gram = rotation.transpose() * rotation;
    return (gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol;
}

bool UnitKinematics::is_finite() const {
    return std::isfinite(axial_mm) && std::isfinite(bend_deg) && std::isfinite(twist_deg);
}

TipVector TipVector::from_displacement(const Eigen::Vector3d& d_mm, double h_mm) {
    TipVector tip;
    tip.d_mm = d_mm;
    tip.theta_act_deg = rad_to_deg(std::atan2(std::hypot(d_mm.x(), d_mm.y()), d_mm.z()));
    tip.deployment = d_mm.norm() / h_mm;
    return tip;
}

double face_azimuth_deg(const ModuleSpec& spec) { return (spec.face - 1) * 60.0; }

double lean_azimuth_deg(const ModuleSpec& spec) { return face_azimuth_deg(spec) + 180.0; }

RigidTransform unit_transform(const ModuleSpec& spec, const UnitKinematics& kin,
                              const ModelConstants& constants, TransformOrder order) {
    if (!kin.is_finite()) throw std::invalid_argument("unit kinematics must be finite");

    const double lean = deg_to_rad(lean_azimuth_deg(spec));
    // Horizontal tilt axis perpendicular to the lean azimuth, oriented so the
    // top cap leans toward the lean direction.
    const Eigen::Vector3d tilt_axis(-std::sin(lean), std::cos(lean), 0.0);
    const Eigen::Matrix3d tilt =
        Eigen::AngleAxisd(deg_to_rad(kin.bend_deg), tilt_axis).toRotationMatrix();

    const double twist_deg = chirality_sign(spec.chirality) * (constants.alpha_deg + kin.twist_deg);
    const Eigen::Matrix3d twist =
        Eigen::AngleAxisd(deg_to_rad(twist_deg), Eigen::Vector3d::UnitZ()).toRotationMatrix();

    RigidTransform out;
    out.rotation = order == TransformOrder::tilt_then_twist ? tilt * twist : twist * tilt;
    // Translation goes along the final local z axis; the twist fixes z, so
    // this equals the tilted axis in the default order.
    out.translation = out.rotation * Eigen::Vector3d(0.0, 0.0, constants.h_mm + kin.axial_mm);
    return out;
}

ActuatorPose actuator_pose(const ActuatorDesign& design,
                           std::span<const UnitKinematics> kinematics,
                           const ModelConstants& constants, TransformOrder order) {
    if (kinematics.size() != design.units.size())
        throw std::invalid_argument("actuator_pose: kinematics count (" +
                                    std::to_string(kinematics.size()) +
                                    ") does not match design length (" +
                                    std::to_string(design.units.size()) + ")");

    ActuatorPose pose;
    pose.cap_poses.reserve(design.units.size());
    RigidTransform accumulated;
    for (std::size_t k = 0; k < design.units.size(); ++k) {
        accumulated = accumulated * unit_transform(design.units[k], kinematics[k], constants, order);
        pose.cap_poses.push_back(accumulated);
    }
    pose.tip = TipVector::from_displacement(accumulated.translation, constants.h_mm);
    return pose;
}

}  // namespace kresling
