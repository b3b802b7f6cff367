#pragma once

#include "ocs/dynamics.hpp"
#include "ocs/so3.hpp"

#include <functional>

namespace ocs {

// Diagonal PD gains. The x and y entries must be positive; the z (yaw) entry
// may be zero, because the wheel axes span only the roll/pitch plane and yaw
// commands are discarded by the allocation anyway.
struct Gains {
    Vec3 kp;  // 1/s^2
    Vec3 kd;  // 1/s

    Gains(const Vec3& kp_, const Vec3& kd_) : kp(kp_), kd(kd_) {
        if (!(kp.x > 0.0 && kp.y > 0.0 && kp.z >= 0.0) ||
            !(kd.x > 0.0 && kd.y > 0.0 && kd.z >= 0.0)) {
            throw std::domain_error(
                "Gains: roll/pitch entries must be positive, yaw entries non-negative");
        }
    }
};

// Time-varying attitude reference. For constant set-points omega_des is zero;
// for ramped references it is the analytic derivative of the ramp.
struct AttitudeReference {
    std::function<Quaternion(double)> attitude_des;   // t -> desired base attitude
    std::function<Vec3(double)> angular_velocity_des; // t -> desired body rates, rad/s
};

AttitudeReference make_setpoint_reference(const Quaternion& q_des);

// Pitch reference ramping 0 -> total_angle over ramp_duration with a quintic
// profile (zero rate and zero acceleration at both ends), then holding.
// angular_velocity_des is the analytic ramp derivative.
AttitudeReference make_backflip_reference(double total_angle, double ramp_duration);

// PD attitude feedback with gyroscopic compensation:
//   tau_fb = -I_r (Kp e + Kd edot) - w x (I_r w),
// e = attitude_error(q_des(t), q), edot = w_des(t) - w. The sign convention
// makes tau_fb the moment the wheels must generate; its reaction -C C^T tau_fb
// drives the base toward the reference.
Vec3 feedback_torque(const BodyState& s, const AttitudeReference& ref, double t,
                     const Gains& gains, const RobotParams& params);

enum class AllocationMode { transpose, pseudoinverse };

// u = C^T tau_fb, as stated. Since C^T C != 1, the effective loop gains pick
// up direction-dependent factors 2 sin^2(alpha) on roll and 2 cos^2(alpha)
// on pitch; the shipped gains absorb this. Yaw moments fall in the null
// space and allocate to zero.
WheelTorques allocate_to_wheels(const Vec3& tau_fb, const AllocationMatrix& axes);

// Moore-Penrose variant u = (C^T C)^-1 C^T tau_fb, exposed for comparison.
// Requires full column rank (0 < alpha < pi/2).
WheelTorques allocate_to_wheels_pseudoinverse(const Vec3& tau_fb, const AllocationMatrix& axes);

// Per-wheel clamp to +-wheel_torque_max, then the momentum clamp: any
// component that would push a wheel past +-wheel_speed_max is zeroed.
WheelTorques saturate(const WheelTorques& u, const BodyState& s, const OcsParams& ocs);

// Full control path: feedback torque, allocation, saturation.
ControlFn make_attitude_controller(const AttitudeReference& ref, const Gains& gains,
                                   const RobotParams& params,
                                   AllocationMode mode = AllocationMode::transpose);

}  // namespace ocs
