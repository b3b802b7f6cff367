#include "ocs/design.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace ocs {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2.0;
}  // namespace

AllocationMatrix allocation_matrix(double alpha) {
    if (!(alpha >= 0.0 && alpha <= kHalfPi)) {
        throw std::domain_error("allocation_matrix: alpha must lie in [0, pi/2]");
    }
    const double s = std::sin(alpha);
    const double c = std::cos(alpha);
    return {{s, c, 0.0}, {-s, c, 0.0}};
}

OcsParams make_ocs_params(double alpha, double wheel_spin_inertia, double wheel_torque_max,
                          double wheel_speed_max) {
    if (!(wheel_spin_inertia > 0.0)) {
        throw std::domain_error("make_ocs_params: wheel spin inertia must be positive");
    }
    if (!(wheel_torque_max > 0.0) || !(wheel_speed_max > 0.0)) {
        throw std::domain_error("make_ocs_params: torque and speed limits must be positive");
    }
    OcsParams p;
    p.alpha = alpha;
    p.axes = allocation_matrix(alpha);
    p.wheel_spin_inertia = wheel_spin_inertia;
    p.wheel_torque_max = wheel_torque_max;
    p.wheel_speed_max = wheel_speed_max;
    return p;
}

double min_flywheel_inertia(double inertia_robot, double delta_theta_dot, double gamma_dot_max) {
    if (!(inertia_robot > 0.0)) {
        throw std::domain_error("min_flywheel_inertia: robot inertia must be positive");
    }
    if (!(gamma_dot_max > 0.0)) {
        throw std::domain_error("min_flywheel_inertia: wheel speed limit must be positive");
    }
    if (!(delta_theta_dot >= 0.0)) {
        throw std::domain_error("min_flywheel_inertia: rate change must be non-negative");
    }
    return inertia_robot * delta_theta_dot / (delta_theta_dot + gamma_dot_max);
}

double optimal_incident_angle(double inertia_robot_xx, double inertia_robot_yy) {
    if (!(inertia_robot_xx > 0.0) || !(inertia_robot_yy > 0.0)) {
        throw std::domain_error("optimal_incident_angle: inertias must be positive");
    }
    return std::atan(inertia_robot_xx / inertia_robot_yy);
}

namespace {

FlywheelSpec cylinder_shell(double r, double R, double h, double rho) {
    FlywheelSpec s;
    s.inner_radius = r;
    s.outer_radius = R;
    s.height = h;
    s.density = rho;
    const double r2 = r * r, R2 = R * R;
    const double r4 = r2 * r2, R4 = R2 * R2;
    s.mass = kPi * rho * h * (R2 - r2);
    s.inertia_zz = 0.5 * kPi * rho * h * (R4 - r4);
    s.inertia_xx = kPi * rho * h / 12.0 * (3.0 * (R4 - r4) + h * h * (R2 - r2));
    return s;
}

}  // namespace

FlywheelSpec hollow_cylinder_inertia(double inner_radius, double outer_radius, double height,
                                     double density) {
    if (!(inner_radius > 0.0 && inner_radius < outer_radius)) {
        throw std::domain_error("hollow_cylinder_inertia: requires 0 < r < R");
    }
    if (!(height > 0.0) || !(density > 0.0)) {
        throw std::domain_error("hollow_cylinder_inertia: height and density must be positive");
    }
    return cylinder_shell(inner_radius, outer_radius, height, density);
}

FlywheelSpec solid_cylinder_inertia(double outer_radius, double height, double density) {
    if (!(outer_radius > 0.0) || !(height > 0.0) || !(density > 0.0)) {
        throw std::domain_error("solid_cylinder_inertia: all inputs must be positive");
    }
    return cylinder_shell(0.0, outer_radius, height, density);
}

double solve_inner_radius(double outer_radius, double height, double density,
                          double target_inertia_zz) {
    if (!(outer_radius > 0.0) || !(height > 0.0) || !(density > 0.0)) {
        throw std::domain_error("solve_inner_radius: geometry inputs must be positive");
    }
    const double solid_max = solid_cylinder_inertia(outer_radius, height, density).inertia_zz;
    if (!(target_inertia_zz > 0.0 && target_inertia_zz < solid_max)) {
        std::ostringstream msg;
        msg << "solve_inner_radius: target spin inertia " << target_inertia_zz
            << " kg m^2 is outside the feasible range (0, " << solid_max
            << ") for R = " << outer_radius << " m, h = " << height << " m, rho = " << density
            << " kg/m^3";
        throw InfeasibleDesignError(msg.str());
    }
    const double R4 = std::pow(outer_radius, 4);
    const double r4 = R4 - 2.0 * target_inertia_zz / (kPi * density * height);
    return std::pow(r4, 0.25);
}

double split_inertia(double planar_inertia, double alpha) {
    if (!(alpha >= 0.0 && alpha < kHalfPi)) {
        throw std::domain_error(
            "split_inertia: alpha must lie in [0, pi/2); at pi/2 the pitch axis has no authority");
    }
    if (!(planar_inertia >= 0.0)) {
        throw std::domain_error("split_inertia: planar inertia must be non-negative");
    }
    return planar_inertia / (2.0 * std::cos(alpha));
}

}  // namespace ocs
