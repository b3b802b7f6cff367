#pragma once

#include "ocs/so3.hpp"

#include <stdexcept>

namespace ocs {

// Thrown when a requested wheel inertia cannot be realized by any inner
// radius for the given outer geometry; the message names the feasible range.
class InfeasibleDesignError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// ---------------------------------------------------------------------------
// FlywheelSpec: hollow-cylinder wheel geometry and derived mass/inertia.
// The spin axis is the cylinder axis (z in the wheel's principal frame).
// ---------------------------------------------------------------------------

struct FlywheelSpec {
    double inner_radius = 0.0;  // m
    double outer_radius = 0.0;  // m
    double height = 0.0;        // m
    double density = 0.0;       // kg/m^3
    double mass = 0.0;          // kg
    double inertia_xx = 0.0;    // kg m^2, transverse (= I_yy)
    double inertia_zz = 0.0;    // kg m^2, about the spin axis
};

// Wheel spin axes expressed in the base frame. Both axes lie in the base
// xy-plane; alpha is the angle each makes with the lateral (+y) direction:
//   left  = ( sin(alpha), cos(alpha), 0)
//   right = (-sin(alpha), cos(alpha), 0)
struct AllocationMatrix {
    Vec3 left;
    Vec3 right;

    // C * (u_l, u_r): body moment produced by per-wheel scalar torques.
    Vec3 apply(double u_left, double u_right) const {
        return u_left * left + u_right * right;
    }
    // C^T * v: projections of a body moment onto the wheel axes.
    void transpose_apply(const Vec3& v, double& out_left, double& out_right) const {
        out_left = dot(left, v);
        out_right = dot(right, v);
    }
};

// Columns (sin a, cos a, 0), (-sin a, cos a, 0). Full column rank iff
// 0 < alpha < pi/2: alpha = 0 makes roll uncontrollable, alpha = pi/2 pitch.
AllocationMatrix allocation_matrix(double alpha);

// Runtime parameters of the two-wheel device.
struct OcsParams {
    double alpha = 0.0;              // rad, incident angle in [0, pi/2]
    AllocationMatrix axes;           // columns of C
    double wheel_spin_inertia = 0.0; // kg m^2, each wheel about its own axis
    double wheel_torque_max = 0.0;   // N m, per wheel
    double wheel_speed_max = 0.0;    // rad/s, per wheel
};

OcsParams make_ocs_params(double alpha, double wheel_spin_inertia, double wheel_torque_max,
                          double wheel_speed_max);

// ---------------------------------------------------------------------------
// Sizing operations
// ---------------------------------------------------------------------------

// Lower bound on the planar wheel inertia needed to change the base rate by
// delta_theta_dot before the wheel reaches gamma_dot_max:
//   I_f >= I_r * d / (d + gamma_dot_max).
// The bound is exact for a maneuver from common rest when gamma_dot_max caps
// the wheel's inertial spin rate and I_r is the inertia of the complete
// vehicle (wheel included); see the sizing tests for the matching
// momentum-exchange oracle.
double min_flywheel_inertia(double inertia_robot, double delta_theta_dot, double gamma_dot_max);

// alpha* = atan(I_xx / I_yy), balancing roll vs pitch authority against the
// base inertia ratio. Result lies in (0, pi/2) for positive inputs.
double optimal_incident_angle(double inertia_robot_xx, double inertia_robot_yy);

// Mass and inertia of a hollow cylinder (0 < r < R), spokes massless:
//   m    = pi rho h (R^2 - r^2)
//   I_zz = 1/2  pi rho h (R^4 - r^4)
//   I_xx = 1/12 pi rho h (3 (R^4 - r^4) + h^2 (R^2 - r^2))
FlywheelSpec hollow_cylinder_inertia(double inner_radius, double outer_radius, double height,
                                     double density);

// r -> 0 limit of the hollow cylinder; kept as a separate entry point so the
// main path can enforce 0 < r.
FlywheelSpec solid_cylinder_inertia(double outer_radius, double height, double density);

// Inner radius realizing a target spin inertia for fixed (R, h, rho):
//   r = (R^4 - 2 T / (pi rho h))^(1/4).
// Throws InfeasibleDesignError when T is outside (0, solid-cylinder I_zz).
double solve_inner_radius(double outer_radius, double height, double density,
                          double target_inertia_zz);

// Per-wheel spin inertia when the planar design inertia is shared between
// the two inclined wheels: I_f / (2 cos(alpha)). alpha = pi/2 leaves pitch
// uncontrollable and is rejected.
double split_inertia(double planar_inertia, double alpha);

}  // namespace ocs
