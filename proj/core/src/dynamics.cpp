#include "ocs/dynamics.hpp"

#include <cmath>

namespace ocs {

Mat3 body_inertia_with_wheels(const RobotParams& params) {
    const double spin = params.ocs.wheel_spin_inertia;
    const AllocationMatrix& axes = params.ocs.axes;
    return params.base_inertia.matrix() +
           spin * (Mat3::outer(axes.left, axes.left) + Mat3::outer(axes.right, axes.right));
}

WheelTorques momentum_clamp(const WheelTorques& u, const BodyState& s, const OcsParams& ocs) {
    WheelTorques out = u;
    const double cap = ocs.wheel_speed_max;
    if ((s.wheel_rate_left >= cap && out.left > 0.0) ||
        (s.wheel_rate_left <= -cap && out.left < 0.0)) {
        out.left = 0.0;
    }
    if ((s.wheel_rate_right >= cap && out.right > 0.0) ||
        (s.wheel_rate_right <= -cap && out.right < 0.0)) {
        out.right = 0.0;
    }
    return out;
}

namespace {

StateDerivative derivative_impl(const BodyState& s, const WheelTorques& u_raw,
                                const Vec3& disturbance_body, const RobotParams& params,
                                const Mat3& inertia_body, const Mat3& inertia_body_inv) {
    const WheelTorques u = momentum_clamp(u_raw, s, params.ocs);
    const OcsParams& ocs = params.ocs;

    StateDerivative d;
    d.position_dot = s.velocity;
    d.velocity_dot = params.gravity;

    d.wheel_accel_left = u.left / ocs.wheel_spin_inertia;
    d.wheel_accel_right = u.right / ocs.wheel_spin_inertia;
    d.wheel_rate_left = s.wheel_rate_left;
    d.wheel_rate_right = s.wheel_rate_right;

    const Vec3 wheel_momentum =
        ocs.wheel_spin_inertia * ocs.axes.apply(s.wheel_rate_left, s.wheel_rate_right);
    const Vec3 omega = s.angular_velocity;
    const Vec3 torque_on_base = -ocs.axes.apply(u.left, u.right) -
                                cross(omega, inertia_body * omega + wheel_momentum) +
                                disturbance_body;
    d.angular_velocity_dot = inertia_body_inv * torque_on_base;

    // qdot = 1/2 q (0, omega)
    const Quaternion& q = s.attitude;
    d.attitude_dot[0] = 0.5 * (-q.x * omega.x - q.y * omega.y - q.z * omega.z);
    d.attitude_dot[1] = 0.5 * (q.w * omega.x + q.y * omega.z - q.z * omega.y);
    d.attitude_dot[2] = 0.5 * (q.w * omega.y - q.x * omega.z + q.z * omega.x);
    d.attitude_dot[3] = 0.5 * (q.w * omega.z + q.x * omega.y - q.y * omega.x);
    return d;
}

BodyState add_scaled(const BodyState& s, const StateDerivative& d, double h) {
    BodyState r = s;
    r.position = s.position + h * d.position_dot;
    r.velocity = s.velocity + h * d.velocity_dot;
    r.attitude.w = s.attitude.w + h * d.attitude_dot[0];
    r.attitude.x = s.attitude.x + h * d.attitude_dot[1];
    r.attitude.y = s.attitude.y + h * d.attitude_dot[2];
    r.attitude.z = s.attitude.z + h * d.attitude_dot[3];
    r.angular_velocity = s.angular_velocity + h * d.angular_velocity_dot;
    r.wheel_rate_left = s.wheel_rate_left + h * d.wheel_accel_left;
    r.wheel_rate_right = s.wheel_rate_right + h * d.wheel_accel_right;
    r.wheel_angle_left = s.wheel_angle_left + h * d.wheel_rate_left;
    r.wheel_angle_right = s.wheel_angle_right + h * d.wheel_rate_right;
    return r;
}

BodyState combine_rk4(const BodyState& s, const StateDerivative& k1, const StateDerivative& k2,
                      const StateDerivative& k3, const StateDerivative& k4, double dt) {
    const double h = dt / 6.0;
    BodyState r = s;
    r.position = s.position + h * (k1.position_dot + 2.0 * k2.position_dot +
                                   2.0 * k3.position_dot + k4.position_dot);
    r.velocity = s.velocity + h * (k1.velocity_dot + 2.0 * k2.velocity_dot +
                                   2.0 * k3.velocity_dot + k4.velocity_dot);
    r.attitude.w = s.attitude.w + h * (k1.attitude_dot[0] + 2.0 * k2.attitude_dot[0] +
                                       2.0 * k3.attitude_dot[0] + k4.attitude_dot[0]);
    r.attitude.x = s.attitude.x + h * (k1.attitude_dot[1] + 2.0 * k2.attitude_dot[1] +
                                       2.0 * k3.attitude_dot[1] + k4.attitude_dot[1]);
    r.attitude.y = s.attitude.y + h * (k1.attitude_dot[2] + 2.0 * k2.attitude_dot[2] +
                                       2.0 * k3.attitude_dot[2] + k4.attitude_dot[2]);
    r.attitude.z = s.attitude.z + h * (k1.attitude_dot[3] + 2.0 * k2.attitude_dot[3] +
                                       2.0 * k3.attitude_dot[3] + k4.attitude_dot[3]);
    r.angular_velocity =
        s.angular_velocity + h * (k1.angular_velocity_dot + 2.0 * k2.angular_velocity_dot +
                                  2.0 * k3.angular_velocity_dot + k4.angular_velocity_dot);
    r.wheel_rate_left = s.wheel_rate_left + h * (k1.wheel_accel_left + 2.0 * k2.wheel_accel_left +
                                                 2.0 * k3.wheel_accel_left + k4.wheel_accel_left);
    r.wheel_rate_right =
        s.wheel_rate_right + h * (k1.wheel_accel_right + 2.0 * k2.wheel_accel_right +
                                  2.0 * k3.wheel_accel_right + k4.wheel_accel_right);
    r.wheel_angle_left = s.wheel_angle_left + h * (k1.wheel_rate_left + 2.0 * k2.wheel_rate_left +
                                                   2.0 * k3.wheel_rate_left + k4.wheel_rate_left);
    r.wheel_angle_right =
        s.wheel_angle_right + h * (k1.wheel_rate_right + 2.0 * k2.wheel_rate_right +
                                   2.0 * k3.wheel_rate_right + k4.wheel_rate_right);
    r.attitude = normalized(r.attitude);
    return r;
}

BodyState rk4_step_impl(const BodyState& s, double t, double dt, const RobotParams& params,
                        const Mat3& inertia_body, const Mat3& inertia_body_inv,
                        const ControlFn& control,
                        const std::function<Vec3(double)>& disturbance_body) {
    const auto eval = [&](double stage_t, const BodyState& stage_s) {
        const WheelTorques u = control ? control(stage_t, stage_s) : WheelTorques{};
        const Vec3 dist = disturbance_body ? disturbance_body(stage_t) : Vec3::zero();
        return derivative_impl(stage_s, u, dist, params, inertia_body, inertia_body_inv);
    };
    const StateDerivative k1 = eval(t, s);
    const StateDerivative k2 = eval(t + 0.5 * dt, add_scaled(s, k1, 0.5 * dt));
    const StateDerivative k3 = eval(t + 0.5 * dt, add_scaled(s, k2, 0.5 * dt));
    const StateDerivative k4 = eval(t + dt, add_scaled(s, k3, dt));
    return combine_rk4(s, k1, k2, k3, k4, dt);
}

bool state_is_finite(const BodyState& s) {
    return is_finite(s.position) && is_finite(s.velocity) && is_finite(s.attitude) &&
           is_finite(s.angular_velocity) && std::isfinite(s.wheel_rate_left) &&
           std::isfinite(s.wheel_rate_right) && std::isfinite(s.wheel_angle_left) &&
           std::isfinite(s.wheel_angle_right);
}

}  // namespace

StateDerivative dynamics_derivative(const BodyState& s, const WheelTorques& u,
                                    const Vec3& disturbance_body, const RobotParams& params) {
    const Mat3 inertia_body = body_inertia_with_wheels(params);
    return derivative_impl(s, u, disturbance_body, params, inertia_body, inverse(inertia_body));
}

Vec3 total_angular_momentum_world(const BodyState& s, const RobotParams& params) {
    const Mat3 inertia_body = body_inertia_with_wheels(params);
    const Vec3 momentum_body =
        inertia_body * s.angular_velocity +
        params.ocs.wheel_spin_inertia *
            params.ocs.axes.apply(s.wheel_rate_left, s.wheel_rate_right);
    return rotate_world_from_body(s.attitude, momentum_body);
}

double rotational_kinetic_energy(const BodyState& s, const RobotParams& params) {
    const Mat3 inertia_body = body_inertia_with_wheels(params);
    const Vec3 w = s.angular_velocity;
    return 0.5 * dot(w, inertia_body * w) +
           0.5 * params.ocs.wheel_spin_inertia *
               (s.wheel_rate_left * s.wheel_rate_left + s.wheel_rate_right * s.wheel_rate_right);
}

BodyState rk4_step(const BodyState& s, const WheelTorques& u, const Vec3& disturbance_body,
                   double dt, const RobotParams& params) {
    const Mat3 inertia_body = body_inertia_with_wheels(params);
    const Mat3 inv = inverse(inertia_body);
    const auto control = [&u](double, const BodyState&) { return u; };
    const auto dist = [&disturbance_body](double) { return disturbance_body; };
    return rk4_step_impl(s, 0.0, dt, params, inertia_body, inv, control, dist);
}

BodyState rk4_step(const BodyState& s, double t, double dt, const RobotParams& params,
                   const ControlFn& control,
                   const std::function<Vec3(double)>& disturbance_body) {
    const Mat3 inertia_body = body_inertia_with_wheels(params);
    return rk4_step_impl(s, t, dt, params, inertia_body, inverse(inertia_body), control,
                         disturbance_body);
}

bool detect_touchdown(const BodyState& s, double plane_height) {
    return s.position.z <= plane_height && s.velocity.z < 0.0;
}

namespace {

BodyState interpolate_state(const BodyState& a, const BodyState& b, double f) {
    BodyState r;
    r.position = a.position + f * (b.position - a.position);
    r.velocity = a.velocity + f * (b.velocity - a.velocity);
    r.attitude = normalized({a.attitude.w + f * (b.attitude.w - a.attitude.w),
                             a.attitude.x + f * (b.attitude.x - a.attitude.x),
                             a.attitude.y + f * (b.attitude.y - a.attitude.y),
                             a.attitude.z + f * (b.attitude.z - a.attitude.z)});
    r.angular_velocity = a.angular_velocity + f * (b.angular_velocity - a.angular_velocity);
    r.wheel_rate_left = a.wheel_rate_left + f * (b.wheel_rate_left - a.wheel_rate_left);
    r.wheel_rate_right = a.wheel_rate_right + f * (b.wheel_rate_right - a.wheel_rate_right);
    r.wheel_angle_left = a.wheel_angle_left + f * (b.wheel_angle_left - a.wheel_angle_left);
    r.wheel_angle_right = a.wheel_angle_right + f * (b.wheel_angle_right - a.wheel_angle_right);
    return r;
}

}  // namespace

Trajectory simulate_flight(const BodyState& initial, const RobotParams& params,
                           const FlightOptions& options, const ControlFn& control,
                           const std::optional<DisturbancePulse>& disturbance) {
    if (!(options.dt > 0.0)) throw std::domain_error("simulate_flight: dt must be positive");
    if (!(options.t_max >= options.dt)) {
        throw std::domain_error("simulate_flight: t_max must be at least dt");
    }
    if (initial.position.z < options.plane_height ||
        (initial.position.z <= options.plane_height && initial.velocity.z <= 0.0)) {
        throw std::domain_error("simulate_flight: initial CoM must start above the touch-down plane");
    }

    const Mat3 inertia_body = body_inertia_with_wheels(params);
    const Mat3 inertia_body_inv = inverse(inertia_body);
    const auto dist_fn = [&disturbance](double t) {
        return (disturbance && disturbance->active(t)) ? disturbance->torque : Vec3::zero();
    };

    Trajectory traj;
    const auto record = [&](double t, const BodyState& s) {
        TrajectorySample sample;
        sample.t = t;
        sample.position = s.position;
        sample.velocity = s.velocity;
        sample.attitude = s.attitude;
        sample.rpy = to_rpy(s.attitude);
        sample.angular_velocity = s.angular_velocity;
        sample.wheel_rate_left = s.wheel_rate_left;
        sample.wheel_rate_right = s.wheel_rate_right;
        const WheelTorques applied =
            momentum_clamp(control ? control(t, s) : WheelTorques{}, s, params.ocs);
        sample.torque_left = applied.left;
        sample.torque_right = applied.right;
        sample.angular_momentum_world = total_angular_momentum_world(s, params);
        traj.samples.push_back(sample);
    };

    BodyState state = initial;
    double t = 0.0;
    record(t, state);
    const long max_steps = std::lround(std::ceil(options.t_max / options.dt - 1e-9));
    for (long k = 0; k < max_steps; ++k) {
        const BodyState next = rk4_step_impl(state, t, options.dt, params, inertia_body,
                                             inertia_body_inv, control, dist_fn);
        const double t_next = static_cast<double>(k + 1) * options.dt;
        if (!state_is_finite(next)) {
            throw SimulationDivergedError("simulate_flight: state became non-finite", t);
        }
        if (detect_touchdown(next, options.plane_height)) {
            // Refine the plane crossing linearly within the step.
            const double z0 = state.position.z - options.plane_height;
            const double z1 = next.position.z - options.plane_height;
            const double f = (z1 < z0) ? std::clamp(z0 / (z0 - z1), 0.0, 1.0) : 1.0;
            const double t_touch = t + f * options.dt;
            const BodyState touch_state = interpolate_state(state, next, f);
            // Avoid a duplicate row when the crossing lands on the previous sample.
            if (t_touch - traj.samples.back().t < 1e-9) {
                traj.samples.pop_back();
            }
            record(t_touch, touch_state);
            traj.touched_down = true;
            traj.end_time = t_touch;
            return traj;
        }
        state = next;
        t = t_next;
        record(t, state);
    }
    traj.touched_down = false;
    traj.end_time = t;
    return traj;
}

// ---------------------------------------------------------------------------
// Planar reference model
// ---------------------------------------------------------------------------

double beanie_closed_form(double angular_momentum, double inertia_robot, double inertia_wheel,
                          double gamma_dot) {
    const double total = inertia_robot + inertia_wheel;
    if (!(total > 0.0)) throw std::domain_error("beanie_closed_form: inertias must sum positive");
    return (angular_momentum - inertia_wheel * gamma_dot) / total;
}

std::vector<BeanieSample> beanie_simulate(const BeanieState& initial, double inertia_robot,
                                          double inertia_wheel,
                                          const std::function<double(double)>& wheel_torque,
                                          double dt, double duration) {
    if (!(dt > 0.0)) throw std::domain_error("beanie_simulate: dt must be positive");
    if (!(duration >= dt)) throw std::domain_error("beanie_simulate: duration must be >= dt");
    if (!(inertia_robot > 0.0) || !(inertia_wheel > 0.0)) {
        throw std::domain_error("beanie_simulate: inertias must be positive");
    }

    const double reflected = (inertia_robot + inertia_wheel) / (inertia_robot * inertia_wheel);
    struct Deriv {
        double theta_dot, theta_ddot, gamma_dot, gamma_ddot;
    };
    const auto deriv = [&](double t, const BeanieState& s) {
        const double tau = wheel_torque ? wheel_torque(t) : 0.0;
        return Deriv{s.theta_dot, -tau / inertia_robot, s.gamma_dot, tau * reflected};
    };
    const auto add = [](const BeanieState& s, const Deriv& d, double h) {
        return BeanieState{s.theta + h * d.theta_dot, s.theta_dot + h * d.theta_ddot,
                           s.gamma + h * d.gamma_dot, s.gamma_dot + h * d.gamma_ddot};
    };

    std::vector<BeanieSample> out;
    const long steps = std::lround(std::ceil(duration / dt - 1e-9));
    out.reserve(static_cast<size_t>(steps) + 1);
    BeanieState s = initial;
    out.push_back({0.0, s});
    for (long k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        const Deriv k1 = deriv(t, s);
        const Deriv k2 = deriv(t + 0.5 * dt, add(s, k1, 0.5 * dt));
        const Deriv k3 = deriv(t + 0.5 * dt, add(s, k2, 0.5 * dt));
        const Deriv k4 = deriv(t + dt, add(s, k3, dt));
        s.theta += dt / 6.0 * (k1.theta_dot + 2.0 * k2.theta_dot + 2.0 * k3.theta_dot + k4.theta_dot);
        s.theta_dot +=
            dt / 6.0 * (k1.theta_ddot + 2.0 * k2.theta_ddot + 2.0 * k3.theta_ddot + k4.theta_ddot);
        s.gamma += dt / 6.0 * (k1.gamma_dot + 2.0 * k2.gamma_dot + 2.0 * k3.gamma_dot + k4.gamma_dot);
        s.gamma_dot +=
            dt / 6.0 * (k1.gamma_ddot + 2.0 * k2.gamma_ddot + 2.0 * k3.gamma_ddot + k4.gamma_ddot);
        out.push_back({static_cast<double>(k + 1) * dt, s});
    }
    return out;
}

}  // namespace ocs
