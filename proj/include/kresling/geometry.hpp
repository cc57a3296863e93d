#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kresling/design_space.hpp"

namespace kresling {

/// Geometric constants of the module family. The undeformed unit is two
/// hexagonal caps of edge l, separated by h and pre-rotated by alpha.
struct ModelConstants {
    double h_mm = 24.0;
    double l_mm = 30.0;
    double alpha_deg = 30.0;
};

/// Proper rigid transform (rotation + translation, mm).
struct RigidTransform {
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    static RigidTransform identity() { return {}; }
    static RigidTransform rotation_z(double angle_deg);

    /// Composition: (a * b) applies b in a's frame, then a.
    RigidTransform operator*(const RigidTransform& other) const;

    Eigen::Vector3d apply(const Eigen::Vector3d& point) const;

    /// Rotation orthonormal with determinant +1 within tol.
    bool is_rigid(double tol = 1e-9) const;
};

/// Deformation of one unit at one pressure: end-cap displacement along the
/// unit axis, bending of the top cap, and twist deviation from the rest
/// rotation alpha.
struct UnitKinematics {
    double axial_mm = 0.0;
    double bend_deg = 0.0;
    double twist_deg = 0.0;

    bool is_finite() const;
    bool operator==(const UnitKinematics&) const = default;
};

/// Vector from the base-cap centroid to the top-cap centroid, with the two
/// scalar summaries used throughout: the angle to the +z axis and the norm
/// normalized by the undeformed module height.
struct TipVector {
    Eigen::Vector3d d_mm = Eigen::Vector3d::Zero();
    double theta_act_deg = 0.0;
    double deployment = 0.0;

    static TipVector from_displacement(const Eigen::Vector3d& d_mm, double h_mm);
};

/// Order in which tilt and twist compose inside one unit. The default makes
/// a single unit's bend angle equal the calibration bend by construction;
/// the alternate order is kept for model-fit experiments.
enum class TransformOrder { tilt_then_twist, twist_then_tilt };

/// Azimuth of the modified panel, degrees; face 1 sits on +x.
double face_azimuth_deg(const ModuleSpec& spec);

/// Units bend away from the popped panel: face azimuth + 180 degrees.
double lean_azimuth_deg(const ModuleSpec& spec);

/// Bottom-cap -> top-cap transform of a single unit: tilt by the bend angle
/// about the horizontal axis perpendicular to the lean azimuth, twist about
/// the local z by c*(alpha + twist), and translate by h + u_z along the
/// tilted local z.
RigidTransform unit_transform(const ModuleSpec& spec, const UnitKinematics& kin,
                              const ModelConstants& constants,
                              TransformOrder order = TransformOrder::tilt_then_twist);

struct ActuatorPose {
    /// cap_poses[k] is the pose of unit k's top cap in the base frame.
    std::vector<RigidTransform> cap_poses;
    TipVector tip;
};

/// Bottom-up accumulation of unit transforms; upper units inherit the twist
/// and tilt of all units below them. Throws std::invalid_argument when the
/// kinematics count does not match the design length.
ActuatorPose actuator_pose(const ActuatorDesign& design,
                           std::span<const UnitKinematics> kinematics,
                           const ModelConstants& constants,
                           TransformOrder order = TransformOrder::tilt_then_twist);

double deg_to_rad(double deg);
double rad_to_deg(double rad);

}  // namespace kresling
