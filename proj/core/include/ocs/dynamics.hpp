#pragma once

#include "ocs/design.hpp"
#include "ocs/so3.hpp"

#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

namespace ocs {

// Raised when the integrator produces a non-finite state; carries the last
// time at which the state was still valid.
class SimulationDivergedError : public std::runtime_error {
public:
    SimulationDivergedError(const std::string& what, double last_valid_time)
        : std::runtime_error(what), last_valid_time(last_valid_time) {}
    double last_valid_time;
};

// ---------------------------------------------------------------------------
// State and parameter types
// ---------------------------------------------------------------------------

// Free-flying base plus two wheels. Wheel spin rates are motor-side
// (relative to the base) about the fixed axes of OcsParams; wheel angles are
// bookkeeping only and do not feed back into the dynamics.
struct BodyState {
    Vec3 position;            // m, world
    Vec3 velocity;            // m/s, world
    Quaternion attitude;      // base body -> world
    Vec3 angular_velocity;    // rad/s, body frame
    double wheel_rate_left = 0.0;   // rad/s
    double wheel_rate_right = 0.0;  // rad/s
    double wheel_angle_left = 0.0;  // rad
    double wheel_angle_right = 0.0; // rad
};

struct WheelTorques {
    double left = 0.0;   // N m
    double right = 0.0;  // N m
};

struct RobotParams {
    double mass_total = 0.0;   // kg
    InertiaTensor base_inertia; // kg m^2, base + legs lumped, body frame, about the CoM
    OcsParams ocs;
    Vec3 gravity;              // m/s^2, world

    RobotParams(double mass, const InertiaTensor& inertia, const OcsParams& ocs_params,
                const Vec3& g)
        : mass_total(mass), base_inertia(inertia), ocs(ocs_params), gravity(g) {
        if (!(mass > 0.0)) throw std::domain_error("RobotParams: mass must be positive");
    }
};

// Constant body tensor seen by the rotational dynamics: the base tensor plus
// each wheel's spin inertia about its own (body-fixed) axis. Wheel rates are
// motor-relative, so the axial share of the wheels rides with the base here.
// The wheels' transverse inertia is assumed lumped into the base tensor.
Mat3 body_inertia_with_wheels(const RobotParams& params);

// Rectangular body-frame torque pulse on [t_start, t_start + duration).
struct DisturbancePulse {
    double t_start = 0.0;   // s
    double duration = 0.0;  // s
    Vec3 torque;            // N m, body frame

    bool active(double t) const { return duration > 0.0 && t >= t_start && t < t_start + duration; }
};

// ---------------------------------------------------------------------------
// Rigid-body dynamics
// ---------------------------------------------------------------------------

struct StateDerivative {
    Vec3 position_dot;
    Vec3 velocity_dot;
    double attitude_dot[4];  // flat quaternion rate (w, x, y, z)
    Vec3 angular_velocity_dot;
    double wheel_accel_left = 0.0;
    double wheel_accel_right = 0.0;
    double wheel_rate_left = 0.0;
    double wheel_rate_right = 0.0;
};

// Momentum saturation: zero each torque component that would push the
// corresponding wheel rate beyond +-wheel_speed_max.
WheelTorques momentum_clamp(const WheelTorques& u, const BodyState& s, const OcsParams& ocs);

// Coupled base + wheel derivative:
//   pdot = v,  vdot = g
//   I_spin * wheel_accel_i = u_i                       (after momentum clamp)
//   I_b * wdot = -C u - w x (I_b w + I_spin C gamma_dot) + tau_disturbance
//   qdot = 1/2 q (0, w)
// with I_b from body_inertia_with_wheels. Conserves the world-frame total
// angular momentum exactly for zero disturbance, for any wheel torques.
StateDerivative dynamics_derivative(const BodyState& s, const WheelTorques& u,
                                    const Vec3& disturbance_body, const RobotParams& params);

// R(q) * (I_b w + I_spin (gdot_l a_l + gdot_r a_r)), about the CoM.
Vec3 total_angular_momentum_world(const BodyState& s, const RobotParams& params);

// Rotational kinetic energy of the model: 1/2 w' I_b w + 1/2 I_spin sum gdot_i^2.
double rotational_kinetic_energy(const BodyState& s, const RobotParams& params);

using ControlFn = std::function<WheelTorques(double t, const BodyState&)>;

// Classical RK4 on the flat state with post-step quaternion renormalization.
// The constant-input overload holds (u, disturbance) across the step; the
// callback overload re-evaluates the control and disturbance at each stage,
// so a smooth feedback law integrates at full fourth order.
BodyState rk4_step(const BodyState& s, const WheelTorques& u, const Vec3& disturbance_body,
                   double dt, const RobotParams& params);
BodyState rk4_step(const BodyState& s, double t, double dt, const RobotParams& params,
                   const ControlFn& control, const std::function<Vec3(double)>& disturbance_body);

// True when the CoM is at or below the plane and moving downward.
bool detect_touchdown(const BodyState& s, double plane_height);

// ---------------------------------------------------------------------------
// Flight simulation
// ---------------------------------------------------------------------------

struct TrajectorySample {
    double t = 0.0;            // s
    Vec3 position;             // m, world
    Vec3 velocity;             // m/s, world
    Quaternion attitude;       // wxyz
    Vec3 rpy;                  // rad, derived for plotting
    Vec3 angular_velocity;     // rad/s, body
    double wheel_rate_left = 0.0;
    double wheel_rate_right = 0.0;
    double torque_left = 0.0;  // N m, applied (after saturation/clamping)
    double torque_right = 0.0;
    Vec3 angular_momentum_world;  // kg m^2/s
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    bool touched_down = false;
    double end_time = 0.0;  // touchdown time when touched_down, else the final sample time
};

struct FlightOptions {
    double dt = 1e-3;           // s
    double t_max = 2.0;         // s
    double plane_height = 0.0;  // m, touch-down plane for the CoM
};

// Integrates from the initial state until touch-down or t_max, recording a
// sample at every step. The control callback (may be null) is evaluated at
// the RK4 stage times; the momentum clamp is applied inside the plant. The
// touch-down crossing is refined by linear interpolation within the step.
Trajectory simulate_flight(const BodyState& initial, const RobotParams& params,
                           const FlightOptions& options, const ControlFn& control = nullptr,
                           const std::optional<DisturbancePulse>& disturbance = std::nullopt);

// ---------------------------------------------------------------------------
// Planar two-body (carrier + wheel) reference model
// ---------------------------------------------------------------------------

struct BeanieState {
    double theta = 0.0;      // rad, carrier pitch
    double theta_dot = 0.0;  // rad/s
    double gamma = 0.0;      // rad, wheel angle relative to the carrier
    double gamma_dot = 0.0;  // rad/s, wheel rate relative to the carrier
};

struct BeanieSample {
    double t = 0.0;
    BeanieState state;
};

// Algebraic inversion of the planar momentum balance
//   L = (I_r + I_f) theta_dot + I_f gamma_dot
// for theta_dot given the wheel rate. Serves as the 1D oracle for the full
// simulator restricted to pitch.
double beanie_closed_form(double angular_momentum, double inertia_robot, double inertia_wheel,
                          double gamma_dot);

// Internal-torque two-body dynamics (torque acts between carrier and wheel):
//   theta_ddot = -tau / I_r
//   gamma_ddot =  tau (I_r + I_f) / (I_r I_f)
// integrated with RK4; conserves (I_r + I_f) theta_dot + I_f gamma_dot for
// any torque profile. Records the initial state and one sample per step.
std::vector<BeanieSample> beanie_simulate(const BeanieState& initial, double inertia_robot,
                                          double inertia_wheel,
                                          const std::function<double(double)>& wheel_torque,
                                          double dt, double duration);

}  // namespace ocs
