#include "ocs/controller.hpp"

#include <algorithm>
#include <cmath>

namespace ocs {

AttitudeReference make_setpoint_reference(const Quaternion& q_des) {
    const Quaternion q = normalized(q_des);
    return {[q](double) { return q; }, [](double) { return Vec3::zero(); }};
}

AttitudeReference make_backflip_reference(double total_angle, double ramp_duration) {
    if (!(ramp_duration > 0.0)) {
        throw std::domain_error("make_backflip_reference: ramp duration must be positive");
    }
    const auto angle = [total_angle, ramp_duration](double t) {
        if (t <= 0.0) return 0.0;
        if (t >= ramp_duration) return total_angle;
        const double u = t / ramp_duration;
        return total_angle * (u * u * u * (10.0 + u * (-15.0 + 6.0 * u)));
    };
    const auto rate = [total_angle, ramp_duration](double t) {
        if (t <= 0.0 || t >= ramp_duration) return 0.0;
        const double u = t / ramp_duration;
        return total_angle / ramp_duration * (u * u * (30.0 + u * (-60.0 + 30.0 * u)));
    };
    return {[angle](double t) { return from_axis_angle(Vec3::unit_y(), angle(t)); },
            [rate](double t) { return Vec3{0.0, rate(t), 0.0}; }};
}

Vec3 feedback_torque(const BodyState& s, const AttitudeReference& ref, double t,
                     const Gains& gains, const RobotParams& params) {
    const Vec3 e = attitude_error(ref.attitude_des(t), s.attitude);
    const Vec3 e_dot = ref.angular_velocity_des(t) - s.angular_velocity;
    const Vec3 pd{gains.kp.x * e.x + gains.kd.x * e_dot.x,
                  gains.kp.y * e.y + gains.kd.y * e_dot.y,
                  gains.kp.z * e.z + gains.kd.z * e_dot.z};
    const Vec3 omega = s.angular_velocity;
    const InertiaTensor& inertia = params.base_inertia;
    return -1.0 * inertia.apply(pd) - cross(omega, inertia.apply(omega));
}

WheelTorques allocate_to_wheels(const Vec3& tau_fb, const AllocationMatrix& axes) {
    WheelTorques u;
    axes.transpose_apply(tau_fb, u.left, u.right);
    return u;
}

WheelTorques allocate_to_wheels_pseudoinverse(const Vec3& tau_fb, const AllocationMatrix& axes) {
    // C^T C = [[1, c], [c, 1]] with c = a_l . a_r = cos(2 alpha).
    const double c = dot(axes.left, axes.right);
    const double det = 1.0 - c * c;
    if (det < 1e-12) {
        throw std::domain_error(
            "allocate_to_wheels_pseudoinverse: C is rank deficient (alpha at 0 or pi/2)");
    }
    double pl = 0.0, pr = 0.0;
    axes.transpose_apply(tau_fb, pl, pr);
    return {(pl - c * pr) / det, (pr - c * pl) / det};
}

WheelTorques saturate(const WheelTorques& u, const BodyState& s, const OcsParams& ocs) {
    WheelTorques out;
    out.left = std::clamp(u.left, -ocs.wheel_torque_max, ocs.wheel_torque_max);
    out.right = std::clamp(u.right, -ocs.wheel_torque_max, ocs.wheel_torque_max);
    return momentum_clamp(out, s, ocs);
}

ControlFn make_attitude_controller(const AttitudeReference& ref, const Gains& gains,
                                   const RobotParams& params, AllocationMode mode) {
    return [ref, gains, params, mode](double t, const BodyState& s) {
        const Vec3 tau_fb = feedback_torque(s, ref, t, gains, params);
        const WheelTorques u = (mode == AllocationMode::transpose)
                                   ? allocate_to_wheels(tau_fb, params.ocs.axes)
                                   : allocate_to_wheels_pseudoinverse(tau_fb, params.ocs.axes);
        return saturate(u, s, params.ocs);
    };
}

}  // namespace ocs
