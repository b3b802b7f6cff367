#include "ocs/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

namespace ocs {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return "";
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_double(const std::string& token, const std::string& key) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = token.data() + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw ScenarioError("field '" + key + "': cannot parse number from '" + token + "'");
    }
    if (!std::isfinite(value)) {
        throw ScenarioError("field '" + key + "': value must be finite");
    }
    return value;
}

std::vector<double> parse_doubles(const std::string& value, const std::string& key, size_t count) {
    std::istringstream iss(value);
    std::vector<double> out;
    std::string token;
    while (iss >> token) out.push_back(parse_double(token, key));
    if (out.size() != count) {
        throw ScenarioError("field '" + key + "': expected " + std::to_string(count) +
                            " numbers, got " + std::to_string(out.size()));
    }
    return out;
}

size_t edit_distance(const std::string& a, const std::string& b) {
    std::vector<size_t> prev(b.size() + 1), cur(b.size() + 1);
    for (size_t j = 0; j <= b.size(); ++j) prev[j] = j;
    for (size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (size_t j = 1; j <= b.size(); ++j) {
            const size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

const std::vector<std::string> kScenarioKeys = {
    "name",
    "gravity",
    "robot.mass",
    "robot.inertia.xx",
    "robot.inertia.yy",
    "robot.inertia.zz",
    "robot.inertia.xy",
    "robot.inertia.xz",
    "robot.inertia.yz",
    "ocs.alpha_deg",
    "ocs.wheel_spin_inertia",
    "limits.wheel_torque_max",
    "limits.wheel_speed_max",
    "initial.position",
    "initial.velocity",
    "initial.attitude_rpy_deg",
    "initial.angular_velocity",
    "initial.wheel_speeds",
    "disturbance.start",
    "disturbance.duration",
    "disturbance.torque",
    "reference.type",
    "reference.attitude_rpy_deg",
    "reference.total_angle_deg",
    "reference.ramp_duration",
    "gains.kp",
    "gains.kd",
    "controller.allocation",
    "integration.dt",
    "integration.t_max",
    "touchdown.plane_height",
    "ocs_enabled",
};

class FieldReader {
public:
    FieldReader(std::map<std::string, std::string> values, const std::vector<std::string>& keys)
        : values_(std::move(values)) {
        for (const auto& [key, value] : values_) {
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                throw ScenarioError("unknown key '" + key + "' (nearest valid key: '" +
                                    nearest_key(key, keys) + "')");
            }
        }
    }

    bool has(const std::string& key) const { return values_.count(key) > 0; }

    std::string required(const std::string& key) const {
        const auto it = values_.find(key);
        if (it == values_.end()) throw ScenarioError("missing required field '" + key + "'");
        return it->second;
    }

    double number(const std::string& key) const { return parse_double(required(key), key); }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    Vec3 vec3(const std::string& key) const {
        const auto v = parse_doubles(required(key), key, 3);
        return {v[0], v[1], v[2]};
    }

    std::pair<double, double> pair2(const std::string& key) const {
        const auto v = parse_doubles(required(key), key, 2);
        return {v[0], v[1]};
    }

    bool boolean(const std::string& key) const {
        const std::string v = required(key);
        if (v == "true") return true;
        if (v == "false") return false;
        throw ScenarioError("field '" + key + "': expected 'true' or 'false', got '" + v + "'");
    }

private:
    std::map<std::string, std::string> values_;
};

void require(bool ok, const std::string& field, const std::string& rule) {
    if (!ok) throw ScenarioError("field '" + field + "': " + rule);
}

}  // namespace

std::string nearest_key(const std::string& key, const std::vector<std::string>& candidates) {
    std::string best;
    size_t best_dist = std::numeric_limits<size_t>::max();
    for (const auto& c : candidates) {
        const size_t d = edit_distance(key, c);
        if (d < best_dist) {
            best_dist = d;
            best = c;
        }
    }
    return best;
}

std::map<std::string, std::string> read_key_value_file(const std::string& text,
                                                       const std::string& origin) {
    std::map<std::string, std::string> out;
    std::istringstream stream(text);
    std::string line;
    int line_no = 0;
    while (std::getline(stream, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ScenarioError(origin + ":" + std::to_string(line_no) +
                                ": expected 'key = value', got '" + line + "'");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ScenarioError(origin + ":" + std::to_string(line_no) + ": empty key");
        }
        if (out.count(key) > 0) {
            throw ScenarioError(origin + ":" + std::to_string(line_no) + ": duplicate key '" +
                                key + "'");
        }
        out[key] = value;
    }
    return out;
}

Scenario parse_scenario_text(const std::string& text, const std::string& origin) {
    const FieldReader f(read_key_value_file(text, origin), kScenarioKeys);
    Scenario sc;

    sc.name = f.required("name");
    require(!sc.name.empty(), "name", "must not be empty");
    sc.gravity = f.vec3("gravity");

    sc.mass_total = f.number("robot.mass");
    require(sc.mass_total > 0.0, "robot.mass", "must be positive");

    Mat3 inertia;
    inertia(0, 0) = f.number("robot.inertia.xx");
    inertia(1, 1) = f.number("robot.inertia.yy");
    inertia(2, 2) = f.number("robot.inertia.zz");
    inertia(0, 1) = inertia(1, 0) = f.number_or("robot.inertia.xy", 0.0);
    inertia(0, 2) = inertia(2, 0) = f.number_or("robot.inertia.xz", 0.0);
    inertia(1, 2) = inertia(2, 1) = f.number_or("robot.inertia.yz", 0.0);
    try {
        (void)InertiaTensor(inertia);
    } catch (const std::domain_error& err) {
        throw ScenarioError(std::string("field 'robot.inertia.*': ") + err.what());
    }
    sc.base_inertia = inertia;

    const double alpha_deg = f.number("ocs.alpha_deg");
    require(alpha_deg >= 0.0 && alpha_deg <= 90.0, "ocs.alpha_deg", "must lie in [0, 90]");
    sc.alpha = alpha_deg * kDegToRad;
    sc.wheel_spin_inertia = f.number("ocs.wheel_spin_inertia");
    require(sc.wheel_spin_inertia > 0.0, "ocs.wheel_spin_inertia", "must be positive");

    sc.wheel_torque_max = f.number("limits.wheel_torque_max");
    require(sc.wheel_torque_max > 0.0, "limits.wheel_torque_max", "must be positive");
    sc.wheel_speed_max = f.number("limits.wheel_speed_max");
    require(sc.wheel_speed_max > 0.0, "limits.wheel_speed_max", "must be positive");

    sc.initial_position = f.vec3("initial.position");
    sc.initial_velocity = f.vec3("initial.velocity");
    sc.initial_rpy = kDegToRad * f.vec3("initial.attitude_rpy_deg");
    sc.initial_angular_velocity = f.vec3("initial.angular_velocity");
    if (f.has("initial.wheel_speeds")) {
        const auto [l, r] = f.pair2("initial.wheel_speeds");
        sc.initial_wheel_rate_left = l;
        sc.initial_wheel_rate_right = r;
    }

    const bool has_disturbance =
        f.has("disturbance.start") || f.has("disturbance.duration") || f.has("disturbance.torque");
    if (has_disturbance) {
        DisturbancePulse pulse;
        pulse.t_start = f.number("disturbance.start");
        pulse.duration = f.number("disturbance.duration");
        pulse.torque = f.vec3("disturbance.torque");
        require(pulse.t_start >= 0.0, "disturbance.start", "must be non-negative");
        require(pulse.duration >= 0.0, "disturbance.duration", "must be non-negative");
        sc.disturbance = pulse;
    }

    const std::string ref_type = f.required("reference.type");
    if (ref_type == "setpoint") {
        sc.reference.type = ReferenceType::setpoint;
        sc.reference.setpoint_rpy = kDegToRad * f.vec3("reference.attitude_rpy_deg");
    } else if (ref_type == "backflip") {
        sc.reference.type = ReferenceType::backflip;
        sc.reference.total_angle = kDegToRad * f.number("reference.total_angle_deg");
        sc.reference.ramp_duration = f.number("reference.ramp_duration");
        require(sc.reference.ramp_duration > 0.0, "reference.ramp_duration", "must be positive");
    } else {
        throw ScenarioError("field 'reference.type': expected 'setpoint' or 'backflip', got '" +
                            ref_type + "'");
    }

    sc.gains_kp = f.vec3("gains.kp");
    sc.gains_kd = f.vec3("gains.kd");
    try {
        (void)Gains(sc.gains_kp, sc.gains_kd);
    } catch (const std::domain_error& err) {
        throw ScenarioError(std::string("field 'gains.*': ") + err.what());
    }

    if (f.has("controller.allocation")) {
        const std::string mode = f.required("controller.allocation");
        if (mode == "transpose") {
            sc.allocation = AllocationMode::transpose;
        } else if (mode == "pseudoinverse") {
            sc.allocation = AllocationMode::pseudoinverse;
            require(alpha_deg > 0.0 && alpha_deg < 90.0, "controller.allocation",
                    "pseudoinverse requires 0 < alpha < 90 deg");
        } else {
            throw ScenarioError(
                "field 'controller.allocation': expected 'transpose' or 'pseudoinverse', got '" +
                mode + "'");
        }
    }

    sc.dt = f.number("integration.dt");
    require(sc.dt > 0.0, "integration.dt", "must be positive");
    sc.t_max = f.number("integration.t_max");
    require(sc.t_max >= sc.dt, "integration.t_max", "must be at least integration.dt");
    sc.plane_height = f.number("touchdown.plane_height");
    require(sc.initial_position.z > sc.plane_height ||
                (sc.initial_position.z == sc.plane_height && sc.initial_velocity.z > 0.0),
            "initial.position", "CoM must start above the touch-down plane");
    sc.ocs_enabled = f.boolean("ocs_enabled");
    return sc;
}

Scenario parse_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioError("cannot open scenario file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str(), path);
}

RobotParams robot_params(const Scenario& sc) {
    return RobotParams(sc.mass_total, InertiaTensor(sc.base_inertia),
                       make_ocs_params(sc.alpha, sc.wheel_spin_inertia, sc.wheel_torque_max,
                                       sc.wheel_speed_max),
                       sc.gravity);
}

BodyState initial_state(const Scenario& sc) {
    BodyState s;
    s.position = sc.initial_position;
    s.velocity = sc.initial_velocity;
    s.attitude = from_rpy(sc.initial_rpy.x, sc.initial_rpy.y, sc.initial_rpy.z);
    s.angular_velocity = sc.initial_angular_velocity;
    s.wheel_rate_left = sc.initial_wheel_rate_left;
    s.wheel_rate_right = sc.initial_wheel_rate_right;
    return s;
}

AttitudeReference make_reference(const ReferenceSpec& spec) {
    if (spec.type == ReferenceType::setpoint) {
        return make_setpoint_reference(
            from_rpy(spec.setpoint_rpy.x, spec.setpoint_rpy.y, spec.setpoint_rpy.z));
    }
    return make_backflip_reference(spec.total_angle, spec.ramp_duration);
}

}  // namespace ocs
