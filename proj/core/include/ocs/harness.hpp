#pragma once

#include "ocs/scenario.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace ocs {

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Scalar digest of one run, derived purely from the trajectory.
struct RunSummary {
    std::string scenario;
    bool ocs_enabled = true;
    bool touched_down = false;
    double touchdown_time = 0.0;        // s (end time when no touch-down occurred)
    Vec3 attitude_at_touchdown;         // rad, roll-pitch-yaw of the final sample
    double max_attitude_error = 0.0;    // rad, peak |attitude error| vs the reference
    double momentum_drift = 0.0;        // relative, over disturbance-free intervals
    double wheel_speed_peak = 0.0;      // rad/s
    double saturation_duty = 0.0;       // fraction of samples with a clipped command
};

struct RunResult {
    Trajectory trajectory;
    RunSummary summary;
};

// Runs one scenario deterministically: identical inputs give byte-identical
// CSV and summary output. `force_disable_ocs` overrides the file's
// ocs_enabled flag (the CLI --disable-ocs switch).
RunResult run(const Scenario& sc, bool force_disable_ocs = false);

// CSV with a fixed header; one row per sample, columns in TrajectorySample
// field order, doubles in shortest round-trip form.
void write_csv(const Trajectory& traj, const std::string& path);
std::string csv_to_string(const Trajectory& traj);
Trajectory read_csv(const std::string& path);

// Key = value serialization of a summary.
void write_summary(const RunSummary& summary, const std::string& path);
std::string summary_to_string(const RunSummary& summary);
RunSummary read_summary(const std::string& path);
RunSummary parse_summary_text(const std::string& text, const std::string& origin = "<string>");

// ---------------------------------------------------------------------------
// Design sheet
// ---------------------------------------------------------------------------

struct DesignInputs {
    std::string name;
    double inertia_robot_xx = 0.0;  // kg m^2
    double inertia_robot_yy = 0.0;  // kg m^2
    // Sizing targets (optional as a group): rate change and wheel speed limit.
    std::optional<double> delta_theta_dot;  // rad/s
    std::optional<double> wheel_speed_max;  // rad/s
    // Wheel geometry; inner_radius given means "evaluate this wheel",
    // otherwise the inner radius is solved from the sizing targets.
    std::optional<double> inner_radius;  // m
    double outer_radius = 0.0;           // m
    double height = 0.0;                 // m
    double density = 0.0;                // kg/m^3
};

struct DesignReport {
    std::string name;
    std::optional<double> inertia_bound_planar;   // kg m^2 (sizing path)
    bool no_wheel_required = false;               // bound is zero
    double optimal_alpha = 0.0;                   // rad
    std::optional<double> per_wheel_spin_inertia; // kg m^2 (sizing path)
    double solved_inner_radius = 0.0;             // m
    FlywheelSpec wheel;
};

DesignInputs parse_design_config(const std::string& path);
DesignInputs parse_design_config_text(const std::string& text,
                                      const std::string& origin = "<string>");

// Full design chain: sizing bound (about the pitch axis), optimal incident
// angle, per-wheel split, solved inner radius, and the resulting wheel sheet.
DesignReport design_report(const DesignInputs& in);
std::string design_report_to_string(const DesignReport& report);

// Side-by-side metric deltas for two or more summaries of the same scenario.
// Throws std::invalid_argument when the scenario names differ.
std::string compare(const std::vector<RunSummary>& summaries);

// Gnuplot script plotting pitch and CoM position from a trajectory CSV.
std::string gnuplot_script(const std::string& csv_path);

// Shortest round-trip decimal form of a double (deterministic, locale-free).
std::string format_double(double value);

}  // namespace ocs
