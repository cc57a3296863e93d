#include "kresling/calibration.hpp"

namespace kresling {

// Keep in sync with data/default_calibration.json (a test compares them).
namespace {

constexpr char kDefaultCalibration[] = R"json({
  "h_mm": 24.0,
  "l_mm": 30.0,
  "alpha_deg": 30.0,
  "kinds": {
    "kresling": {
      "keypoints": [
        {"pressure_kpa": -30.0, "state": "s0", "u_z_mm": -16.0, "theta_deg": 0.0, "phi_deg": 25.0},
        {"pressure_kpa": 0.0, "state": "s0", "u_z_mm": 0.0, "theta_deg": 0.0, "phi_deg": 0.0},
        {"pressure_kpa": 35.0, "state": "s0", "u_z_mm": 3.4, "theta_deg": 0.0, "phi_deg": -12.0}
      ]
    },
    "delta2": {
      "p_plus_kpa": 21.5,
      "p_minus_kpa": -15.8,
      "note": "estimated: thresholds and kinematics interpolated to respect the cross-depth ordering; only delta3 carries directly measured values",
      "keypoints": [
        {"pressure_kpa": -30.0, "state": "s0", "u_z_mm": -15.5, "theta_deg": 0.0, "phi_deg": 24.0},
        {"pressure_kpa": -15.8, "state": "s0", "u_z_mm": -5.0, "theta_deg": 1.8, "phi_deg": 7.0},
        {"pressure_kpa": 0.0, "state": "s0", "u_z_mm": 0.0, "theta_deg": 0.0, "phi_deg": 0.0},
        {"pressure_kpa": 21.5, "state": "s0", "u_z_mm": 2.2, "theta_deg": 0.0, "phi_deg": -5.5},
        {"pressure_kpa": -15.8, "state": "s1", "u_z_mm": -5.2, "theta_deg": 21.4, "phi_deg": 6.5},
        {"pressure_kpa": 0.0, "state": "s1", "u_z_mm": 1.0, "theta_deg": 2.4, "phi_deg": 1.8},
        {"pressure_kpa": 21.5, "state": "s1", "u_z_mm": 2.6, "theta_deg": 8.0, "phi_deg": -5.0},
        {"pressure_kpa": 35.0, "state": "s1", "u_z_mm": 2.8, "theta_deg": 7.8, "phi_deg": -11.0}
      ]
    },
    "delta3": {
      "p_plus_kpa": 26.1,
      "p_minus_kpa": -21.2,
      "keypoints": [
        {"pressure_kpa": -30.0, "state": "s0", "u_z_mm": -16.0, "theta_deg": 0.0, "phi_deg": 24.0},
        {"pressure_kpa": -21.2, "state": "s0", "u_z_mm": -6.5, "theta_deg": 2.0, "phi_deg": 8.0},
        {"pressure_kpa": 0.0, "state": "s0", "u_z_mm": 0.0, "theta_deg": 0.0, "phi_deg": 0.0},
        {"pressure_kpa": 26.1, "state": "s0", "u_z_mm": 2.6, "theta_deg": 0.0, "phi_deg": -6.5},
        {"pressure_kpa": -21.2, "state": "s1", "u_z_mm": -6.8, "theta_deg": 21.7, "phi_deg": 7.5},
        {"pressure_kpa": 0.0, "state": "s1", "u_z_mm": 1.2, "theta_deg": 2.5, "phi_deg": 2.0},
        {"pressure_kpa": 26.1, "state": "s1", "u_z_mm": 3.1, "theta_deg": 8.5, "phi_deg": -6.0},
        {"pressure_kpa": 35.0, "state": "s1", "u_z_mm": 3.4, "theta_deg": 8.3, "phi_deg": -11.5}
      ]
    },
    "delta4": {
      "p_plus_kpa": 30.9,
      "p_minus_kpa": -26.6,
      "note": "estimated: thresholds and kinematics interpolated to respect the cross-depth ordering; only delta3 carries directly measured values",
      "keypoints": [
        {"pressure_kpa": -30.0, "state": "s0", "u_z_mm": -16.5, "theta_deg": 0.0, "phi_deg": 26.0},
        {"pressure_kpa": -26.6, "state": "s0", "u_z_mm": -8.0, "theta_deg": 2.2, "phi_deg": 9.0},
        {"pressure_kpa": 0.0, "state": "s0", "u_z_mm": 0.0, "theta_deg": 0.0, "phi_deg": 0.0},
        {"pressure_kpa": 30.9, "state": "s0", "u_z_mm": 3.0, "theta_deg": 0.0, "phi_deg": -7.5},
        {"pressure_kpa": -26.6, "state": "s1", "u_z_mm": -8.4, "theta_deg": 21.9, "phi_deg": 8.5},
        {"pressure_kpa": 0.0, "state": "s1", "u_z_mm": 1.4, "theta_deg": 2.6, "phi_deg": 2.2},
        {"pressure_kpa": 30.9, "state": "s1", "u_z_mm": 3.6, "theta_deg": 9.0, "phi_deg": -7.0},
        {"pressure_kpa": 35.0, "state": "s1", "u_z_mm": 4.0, "theta_deg": 8.8, "phi_deg": -12.0}
      ]
    }
  }
}
)json";

}  // namespace

std::string_view default_calibration_text() { return kDefaultCalibration; }

}  // namespace kresling
