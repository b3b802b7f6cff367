#include "ocs/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace ocs {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) throw IoError("format_double: conversion failed");
    return std::string(buf, ptr);
}

namespace {

double parse_double_strict(const std::string& token, const std::string& what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        throw IoError(what + ": cannot parse number from '" + token + "'");
    }
    return value;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << text;
    if (!out) throw IoError("write to '" + path + "' failed");
}

std::string read_text_file(const std::string& path, const std::string& what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + what + " '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

}  // namespace

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

RunResult run(const Scenario& sc, bool force_disable_ocs) {
    const RobotParams params = robot_params(sc);
    const BodyState initial = initial_state(sc);
    const AttitudeReference reference = make_reference(sc.reference);
    const Gains gains(sc.gains_kp, sc.gains_kd);
    const bool ocs_on = sc.ocs_enabled && !force_disable_ocs;

    ControlFn control;
    if (ocs_on) control = make_attitude_controller(reference, gains, params, sc.allocation);

    FlightOptions options;
    options.dt = sc.dt;
    options.t_max = sc.t_max;
    options.plane_height = sc.plane_height;

    RunResult result;
    result.trajectory = simulate_flight(initial, params, options, control, sc.disturbance);

    const Trajectory& traj = result.trajectory;
    RunSummary& summary = result.summary;
    summary.scenario = sc.name;
    summary.ocs_enabled = ocs_on;
    summary.touched_down = traj.touched_down;
    summary.touchdown_time = traj.end_time;
    summary.attitude_at_touchdown = traj.samples.back().rpy;

    const double momentum_scale_floor =
        max_eigenvalue_symmetric(body_inertia_with_wheels(params)) * 1.0;
    // Drift is measured per disturbance-free interval, each against its own
    // starting momentum.
    std::vector<std::pair<double, double>> intervals;
    if (sc.disturbance && sc.disturbance->duration > 0.0) {
        intervals.emplace_back(0.0, sc.disturbance->t_start);
        intervals.emplace_back(sc.disturbance->t_start + sc.disturbance->duration,
                               std::numeric_limits<double>::infinity());
    } else {
        intervals.emplace_back(0.0, std::numeric_limits<double>::infinity());
    }
    double drift = 0.0;
    for (const auto& [t0, t1] : intervals) {
        bool have_ref = false;
        Vec3 momentum_ref;
        double scale = momentum_scale_floor;
        for (const TrajectorySample& s : traj.samples) {
            if (s.t < t0 || s.t > t1) continue;
            if (!have_ref) {
                momentum_ref = s.angular_momentum_world;
                scale = std::max(norm(momentum_ref), momentum_scale_floor);
                have_ref = true;
                continue;
            }
            drift = std::max(drift, norm(s.angular_momentum_world - momentum_ref) / scale);
        }
    }
    summary.momentum_drift = drift;

    double wheel_peak = 0.0;
    size_t saturated = 0;
    for (const TrajectorySample& s : traj.samples) {
        wheel_peak = std::max({wheel_peak, std::abs(s.wheel_rate_left),
                               std::abs(s.wheel_rate_right)});
        summary.max_attitude_error =
            std::max(summary.max_attitude_error,
                     norm(attitude_error(reference.attitude_des(s.t), s.attitude)));
        if (ocs_on) {
            BodyState probe;
            probe.attitude = s.attitude;
            probe.angular_velocity = s.angular_velocity;
            probe.wheel_rate_left = s.wheel_rate_left;
            probe.wheel_rate_right = s.wheel_rate_right;
            const Vec3 tau = feedback_torque(probe, reference, s.t, gains, params);
            const WheelTorques raw = (sc.allocation == AllocationMode::transpose)
                                         ? allocate_to_wheels(tau, params.ocs.axes)
                                         : allocate_to_wheels_pseudoinverse(tau, params.ocs.axes);
            const WheelTorques clipped = saturate(raw, probe, params.ocs);
            if (clipped.left != raw.left || clipped.right != raw.right) ++saturated;
        }
    }
    summary.wheel_speed_peak = wheel_peak;
    summary.saturation_duty =
        traj.samples.empty() ? 0.0 : static_cast<double>(saturated) / traj.samples.size();
    return result;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace {
const char* kCsvHeader =
    "t,p_x,p_y,p_z,v_x,v_y,v_z,q_w,q_x,q_y,q_z,roll,pitch,yaw,"
    "omega_x,omega_y,omega_z,wheel_rate_l,wheel_rate_r,torque_l,torque_r,L_x,L_y,L_z";
}

std::string csv_to_string(const Trajectory& traj) {
    std::string out = kCsvHeader;
    out += '\n';
    for (const TrajectorySample& s : traj.samples) {
        const double row[24] = {s.t,
                                s.position.x, s.position.y, s.position.z,
                                s.velocity.x, s.velocity.y, s.velocity.z,
                                s.attitude.w, s.attitude.x, s.attitude.y, s.attitude.z,
                                s.rpy.x, s.rpy.y, s.rpy.z,
                                s.angular_velocity.x, s.angular_velocity.y, s.angular_velocity.z,
                                s.wheel_rate_left, s.wheel_rate_right,
                                s.torque_left, s.torque_right,
                                s.angular_momentum_world.x, s.angular_momentum_world.y,
                                s.angular_momentum_world.z};
        for (int i = 0; i < 24; ++i) {
            if (i > 0) out += ',';
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

void write_csv(const Trajectory& traj, const std::string& path) {
    write_text_file(path, csv_to_string(traj));
}

Trajectory read_csv(const std::string& path) {
    const std::string text = read_text_file(path, "trajectory CSV");
    std::istringstream stream(text);
    std::string line;
    if (!std::getline(stream, line)) throw IoError("trajectory CSV '" + path + "' is empty");
    if (line != kCsvHeader) throw IoError("trajectory CSV '" + path + "' has an unexpected header");

    Trajectory traj;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        std::array<double, 24> row{};
        size_t pos = 0;
        for (int i = 0; i < 24; ++i) {
            const size_t comma = line.find(',', pos);
            const bool last = (i == 23);
            if (last != (comma == std::string::npos)) {
                throw IoError("trajectory CSV '" + path + "': malformed row '" + line + "'");
            }
            const std::string token =
                last ? line.substr(pos) : line.substr(pos, comma - pos);
            row[i] = parse_double_strict(token, "trajectory CSV");
            pos = comma + 1;
        }
        TrajectorySample s;
        s.t = row[0];
        s.position = {row[1], row[2], row[3]};
        s.velocity = {row[4], row[5], row[6]};
        s.attitude = {row[7], row[8], row[9], row[10]};
        s.rpy = {row[11], row[12], row[13]};
        s.angular_velocity = {row[14], row[15], row[16]};
        s.wheel_rate_left = row[17];
        s.wheel_rate_right = row[18];
        s.torque_left = row[19];
        s.torque_right = row[20];
        s.angular_momentum_world = {row[21], row[22], row[23]};
        traj.samples.push_back(s);
    }
    if (!traj.samples.empty()) traj.end_time = traj.samples.back().t;
    return traj;
}

// ---------------------------------------------------------------------------
// Summary
// ---------------------------------------------------------------------------

std::string summary_to_string(const RunSummary& s) {
    std::ostringstream out;
    out << "scenario = " << s.scenario << '\n';
    out << "ocs_enabled = " << (s.ocs_enabled ? "true" : "false") << '\n';
    out << "touched_down = " << (s.touched_down ? "true" : "false") << '\n';
    out << "touchdown_time = " << format_double(s.touchdown_time) << '\n';
    out << "touchdown_roll = " << format_double(s.attitude_at_touchdown.x) << '\n';
    out << "touchdown_pitch = " << format_double(s.attitude_at_touchdown.y) << '\n';
    out << "touchdown_yaw = " << format_double(s.attitude_at_touchdown.z) << '\n';
    out << "max_attitude_error = " << format_double(s.max_attitude_error) << '\n';
    out << "momentum_drift = " << format_double(s.momentum_drift) << '\n';
    out << "wheel_speed_peak = " << format_double(s.wheel_speed_peak) << '\n';
    out << "saturation_duty = " << format_double(s.saturation_duty) << '\n';
    return out.str();
}

void write_summary(const RunSummary& summary, const std::string& path) {
    write_text_file(path, summary_to_string(summary));
}

RunSummary parse_summary_text(const std::string& text, const std::string& origin) {
    std::map<std::string, std::string> kv;
    try {
        kv = read_key_value_file(text, origin);
    } catch (const ScenarioError& err) {
        throw IoError(err.what());
    }
    const auto get = [&](const std::string& key) {
        const auto it = kv.find(key);
        if (it == kv.end()) throw IoError(origin + ": summary is missing '" + key + "'");
        return it->second;
    };
    const auto get_bool = [&](const std::string& key) { return get(key) == "true"; };
    const auto get_num = [&](const std::string& key) {
        return parse_double_strict(get(key), origin + " field '" + key + "'");
    };
    RunSummary s;
    s.scenario = get("scenario");
    s.ocs_enabled = get_bool("ocs_enabled");
    s.touched_down = get_bool("touched_down");
    s.touchdown_time = get_num("touchdown_time");
    s.attitude_at_touchdown =
        Vec3{get_num("touchdown_roll"), get_num("touchdown_pitch"), get_num("touchdown_yaw")};
    s.max_attitude_error = get_num("max_attitude_error");
    s.momentum_drift = get_num("momentum_drift");
    s.wheel_speed_peak = get_num("wheel_speed_peak");
    s.saturation_duty = get_num("saturation_duty");
    return s;
}

RunSummary read_summary(const std::string& path) {
    return parse_summary_text(read_text_file(path, "summary"), path);
}

// ---------------------------------------------------------------------------
// Design sheet
// ---------------------------------------------------------------------------

namespace {

const std::vector<std::string> kDesignKeys = {
    "name",
    "robot.inertia.xx",
    "robot.inertia.yy",
    "sizing.delta_theta_dot",
    "sizing.wheel_speed_max",
    "wheel.inner_radius",
    "wheel.outer_radius",
    "wheel.height",
    "wheel.density",
};

}  // namespace

DesignInputs parse_design_config_text(const std::string& text, const std::string& origin) {
    const auto kv = read_key_value_file(text, origin);
    for (const auto& [key, value] : kv) {
        if (std::find(kDesignKeys.begin(), kDesignKeys.end(), key) == kDesignKeys.end()) {
            throw ScenarioError("unknown key '" + key + "' (nearest valid key: '" +
                                nearest_key(key, kDesignKeys) + "')");
        }
    }
    const auto get = [&](const std::string& key) -> std::string {
        const auto it = kv.find(key);
        if (it == kv.end()) throw ScenarioError("missing required field '" + key + "'");
        return it->second;
    };
    const auto get_num = [&](const std::string& key) {
        const std::string v = get(key);
        double value = 0.0;
        const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw ScenarioError("field '" + key + "': cannot parse number from '" + v + "'");
        }
        return value;
    };

    DesignInputs in;
    in.name = kv.count("name") ? kv.at("name") : "design";
    in.inertia_robot_xx = get_num("robot.inertia.xx");
    in.inertia_robot_yy = get_num("robot.inertia.yy");
    if (kv.count("sizing.delta_theta_dot") || kv.count("sizing.wheel_speed_max")) {
        in.delta_theta_dot = get_num("sizing.delta_theta_dot");
        in.wheel_speed_max = get_num("sizing.wheel_speed_max");
    }
    if (kv.count("wheel.inner_radius")) in.inner_radius = get_num("wheel.inner_radius");
    in.outer_radius = get_num("wheel.outer_radius");
    in.height = get_num("wheel.height");
    in.density = get_num("wheel.density");
    if (!in.delta_theta_dot && !in.inner_radius) {
        throw ScenarioError(
            "design config needs either sizing.* targets or an explicit wheel.inner_radius");
    }
    return in;
}

DesignInputs parse_design_config(const std::string& path) {
    return parse_design_config_text(read_text_file(path, "design config"), path);
}

DesignReport design_report(const DesignInputs& in) {
    DesignReport report;
    report.name = in.name;
    report.optimal_alpha = optimal_incident_angle(in.inertia_robot_xx, in.inertia_robot_yy);

    if (in.delta_theta_dot) {
        const double bound =
            min_flywheel_inertia(in.inertia_robot_yy, *in.delta_theta_dot, *in.wheel_speed_max);
        report.inertia_bound_planar = bound;
        report.no_wheel_required = (bound == 0.0);
        if (!report.no_wheel_required) {
            report.per_wheel_spin_inertia = split_inertia(bound, report.optimal_alpha);
        }
    }

    if (in.inner_radius) {
        report.solved_inner_radius = *in.inner_radius;
        report.wheel =
            hollow_cylinder_inertia(*in.inner_radius, in.outer_radius, in.height, in.density);
    } else if (report.per_wheel_spin_inertia) {
        report.solved_inner_radius = solve_inner_radius(in.outer_radius, in.height, in.density,
                                                        *report.per_wheel_spin_inertia);
        report.wheel = hollow_cylinder_inertia(report.solved_inner_radius, in.outer_radius,
                                               in.height, in.density);
    }
    return report;
}

std::string design_report_to_string(const DesignReport& r) {
    std::ostringstream out;
    out << "name = " << r.name << '\n';
    if (r.inertia_bound_planar) {
        out << "inertia_bound_planar = " << format_double(*r.inertia_bound_planar) << '\n';
        out << "no_wheel_required = " << (r.no_wheel_required ? "true" : "false") << '\n';
    }
    out << "optimal_alpha_deg = " << format_double(r.optimal_alpha * 180.0 / std::numbers::pi)
        << '\n';
    if (r.per_wheel_spin_inertia) {
        out << "per_wheel_spin_inertia = " << format_double(*r.per_wheel_spin_inertia) << '\n';
    }
    if (r.wheel.outer_radius > 0.0) {
        out << "wheel.inner_radius = " << format_double(r.solved_inner_radius) << '\n';
        out << "wheel.outer_radius = " << format_double(r.wheel.outer_radius) << '\n';
        out << "wheel.height = " << format_double(r.wheel.height) << '\n';
        out << "wheel.density = " << format_double(r.wheel.density) << '\n';
        out << "wheel.mass = " << format_double(r.wheel.mass) << '\n';
        out << "wheel.inertia_xx = " << format_double(r.wheel.inertia_xx) << '\n';
        out << "wheel.inertia_zz = " << format_double(r.wheel.inertia_zz) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// compare
// ---------------------------------------------------------------------------

std::string compare(const std::vector<RunSummary>& summaries) {
    if (summaries.size() < 2) {
        throw std::invalid_argument("compare: needs at least two summaries");
    }
    for (const RunSummary& s : summaries) {
        if (s.scenario != summaries.front().scenario) {
            throw std::invalid_argument("compare: scenario names differ ('" +
                                        summaries.front().scenario + "' vs '" + s.scenario + "')");
        }
    }

    struct Metric {
        const char* name;
        std::function<double(const RunSummary&)> get;
    };
    const std::vector<Metric> metrics = {
        {"touchdown_time", [](const RunSummary& s) { return s.touchdown_time; }},
        {"touchdown_roll", [](const RunSummary& s) { return s.attitude_at_touchdown.x; }},
        {"touchdown_pitch", [](const RunSummary& s) { return s.attitude_at_touchdown.y; }},
        {"touchdown_yaw", [](const RunSummary& s) { return s.attitude_at_touchdown.z; }},
        {"max_attitude_error", [](const RunSummary& s) { return s.max_attitude_error; }},
        {"momentum_drift", [](const RunSummary& s) { return s.momentum_drift; }},
        {"wheel_speed_peak", [](const RunSummary& s) { return s.wheel_speed_peak; }},
        {"saturation_duty", [](const RunSummary& s) { return s.saturation_duty; }},
    };

    std::ostringstream out;
    out << "scenario = " << summaries.front().scenario << '\n';
    out << "runs = " << summaries.size() << '\n';
    for (size_t i = 0; i < summaries.size(); ++i) {
        out << "run" << i + 1 << ".ocs_enabled = "
            << (summaries[i].ocs_enabled ? "true" : "false") << '\n';
    }
    for (const Metric& m : metrics) {
        out << m.name << " =";
        for (const RunSummary& s : summaries) out << ' ' << format_double(m.get(s));
        out << " | delta";
        for (size_t i = 1; i < summaries.size(); ++i) {
            out << ' ' << format_double(m.get(summaries[i]) - m.get(summaries.front()));
        }
        out << '\n';
    }
    return out.str();
}

std::string gnuplot_script(const std::string& csv_path) {
    std::ostringstream out;
    out << "set datafile separator ','\n";
    out << "set key autotitle columnhead\n";
    out << "set xlabel 't [s]'\n";
    out << "set terminal pngcairo size 1200,900\n";
    out << "set output 'trajectory.png'\n";
    out << "set multiplot layout 3,1\n";
    out << "set ylabel 'attitude [rad]'\n";
    out << "plot '" << csv_path << "' using 1:12 with lines title 'roll', \\\n"
        << "     '" << csv_path << "' using 1:13 with lines title 'pitch', \\\n"
        << "     '" << csv_path << "' using 1:14 with lines title 'yaw'\n";
    out << "set ylabel 'CoM [m]'\n";
    out << "plot '" << csv_path << "' using 1:2 with lines title 'x', \\\n"
        << "     '" << csv_path << "' using 1:4 with lines title 'z'\n";
    out << "set ylabel 'wheel rate [rad/s]'\n";
    out << "plot '" << csv_path << "' using 1:18 with lines title 'left', \\\n"
        << "     '" << csv_path << "' using 1:19 with lines title 'right'\n";
    out << "unset multiplot\n";
    return out.str();
}

}  // namespace ocs
