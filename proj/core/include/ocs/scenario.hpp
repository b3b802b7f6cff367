#pragma once

#include "ocs/controller.hpp"
#include "ocs/dynamics.hpp"

#include <map>
#include <optional>
#include <string>

namespace ocs {

// Scenario-file problem: missing file, malformed line, unknown key, or a
// field-level constraint violation. The message names the offending field.
class ScenarioError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ReferenceType { setpoint, backflip };

struct ReferenceSpec {
    ReferenceType type = ReferenceType::setpoint;
    Vec3 setpoint_rpy;           // rad (setpoint)
    double total_angle = 0.0;    // rad (backflip)
    double ramp_duration = 0.0;  // s (backflip)
};

// One fully validated simulation configuration. Angles cross the file
// boundary in degrees and are stored here in radians.
struct Scenario {
    std::string name;
    Vec3 gravity;                 // m/s^2, world
    double mass_total = 0.0;      // kg
    Mat3 base_inertia;            // kg m^2 (validated symmetric positive definite)
    double alpha = 0.0;           // rad
    double wheel_spin_inertia = 0.0;  // kg m^2 per wheel
    double wheel_torque_max = 0.0;    // N m
    double wheel_speed_max = 0.0;     // rad/s
    Vec3 initial_position;        // m
    Vec3 initial_velocity;        // m/s
    Vec3 initial_rpy;             // rad
    Vec3 initial_angular_velocity;  // rad/s, body
    double initial_wheel_rate_left = 0.0;   // rad/s
    double initial_wheel_rate_right = 0.0;  // rad/s
    std::optional<DisturbancePulse> disturbance;
    ReferenceSpec reference;
    Vec3 gains_kp;                // 1/s^2
    Vec3 gains_kd;                // 1/s
    AllocationMode allocation = AllocationMode::transpose;
    double dt = 0.0;              // s
    double t_max = 0.0;           // s
    double plane_height = 0.0;    // m
    bool ocs_enabled = true;
};

// Parses and validates a scenario file: `key = value` lines with dotted
// section prefixes, `#` comments, blank lines ignored. Unknown keys are
// rejected with the nearest valid key named; duplicate keys are rejected;
// every constraint violation names the field.
Scenario parse_scenario(const std::string& path);

// Same, from file contents (used by parse_scenario and the tests).
Scenario parse_scenario_text(const std::string& text, const std::string& origin = "<string>");

RobotParams robot_params(const Scenario& sc);
BodyState initial_state(const Scenario& sc);
AttitudeReference make_reference(const ReferenceSpec& spec);

// Shared low-level reader for the flat key = value format.
std::map<std::string, std::string> read_key_value_file(const std::string& text,
                                                       const std::string& origin);

// Smallest-edit-distance candidate, used for unknown-key suggestions.
std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates);

}  // namespace ocs
