// Command-line front end: runs scenarios, prints design sheets, compares
// run summaries, and emits gnuplot scripts for trajectory CSVs.

#include "ocs/harness.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

namespace {

// 0 success, 1 validation, 2 divergence, 3 I/O.
constexpr int kExitValidation = 1;
constexpr int kExitDiverged = 2;
constexpr int kExitIo = 3;

int run_command(const std::string& scenario_path, const std::string& out_dir, bool disable_ocs,
                double dt_override, double duration_override) {
    ocs::Scenario sc = ocs::parse_scenario(scenario_path);
    if (dt_override > 0.0) sc.dt = dt_override;
    if (duration_override > 0.0) sc.t_max = duration_override;
    if (!(sc.t_max >= sc.dt)) {
        throw ocs::ScenarioError("field 'integration.t_max': must be at least integration.dt");
    }

    const ocs::RunResult result = ocs::run(sc, disable_ocs);

    std::filesystem::create_directories(out_dir);
    const std::string suffix = disable_ocs ? "_ocs_off" : "";
    const std::string csv_path = out_dir + "/" + sc.name + suffix + ".csv";
    const std::string summary_path = out_dir + "/" + sc.name + suffix + ".summary";
    ocs::write_csv(result.trajectory, csv_path);
    ocs::write_summary(result.summary, summary_path);

    std::cout << ocs::summary_to_string(result.summary);
    std::cout << "trajectory = " << csv_path << '\n';
    std::cout << "summary = " << summary_path << '\n';
    return 0;
}

int design_command(const std::string& config_path, const std::string& out_path) {
    const ocs::DesignInputs inputs = ocs::parse_design_config(config_path);
    const std::string report = ocs::design_report_to_string(ocs::design_report(inputs));
    std::cout << report;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ocs::IoError("cannot open '" + out_path + "' for writing");
        out << report;
    }
    return 0;
}

int compare_command(const std::vector<std::string>& summary_paths) {
    std::vector<ocs::RunSummary> summaries;
    summaries.reserve(summary_paths.size());
    for (const std::string& path : summary_paths) summaries.push_back(ocs::read_summary(path));
    std::cout << ocs::compare(summaries);
    return 0;
}

int plot_script_command(const std::string& csv_path, const std::string& out_path) {
    const std::string script = ocs::gnuplot_script(csv_path);
    if (out_path.empty()) {
        std::cout << script;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw ocs::IoError("cannot open '" + out_path + "' for writing");
        out << script;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two-flywheel orientation control system: design and flight simulation"};
    app.require_subcommand(1);

    std::string scenario_path, out_dir = ".";
    bool disable_ocs = false;
    double dt_override = 0.0, duration_override = 0.0;
    CLI::App* cmd_run = app.add_subcommand("run", "Simulate a scenario file");
    cmd_run->add_option("--scenario", scenario_path, "Scenario file")->required();
    cmd_run->add_option("--out", out_dir, "Output directory (default: current)");
    cmd_run->add_flag("--disable-ocs", disable_ocs, "Run with the wheels unpowered");
    cmd_run->add_option("--dt", dt_override, "Override integration step [s]");
    cmd_run->add_option("--duration", duration_override, "Override max duration [s]");

    std::string design_config, design_out;
    CLI::App* cmd_design = app.add_subcommand("design", "Print a flywheel design sheet");
    cmd_design->add_option("--config", design_config, "Design config file")->required();
    cmd_design->add_option("--out", design_out, "Also write the sheet to this file");

    std::vector<std::string> summary_paths;
    CLI::App* cmd_compare = app.add_subcommand("compare", "Compare run summaries");
    cmd_compare->add_option("summaries", summary_paths, "Summary files (>= 2)")
        ->required()
        ->expected(2, -1);

    std::string plot_csv, plot_out;
    CLI::App* cmd_plot = app.add_subcommand("plot-script", "Emit a gnuplot script for a CSV");
    cmd_plot->add_option("--csv", plot_csv, "Trajectory CSV path")->required();
    cmd_plot->add_option("--out", plot_out, "Script output path (default: stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            return run_command(scenario_path, out_dir, disable_ocs, dt_override,
                               duration_override);
        }
        if (cmd_design->parsed()) return design_command(design_config, design_out);
        if (cmd_compare->parsed()) return compare_command(summary_paths);
        if (cmd_plot->parsed()) return plot_script_command(plot_csv, plot_out);
    } catch (const ocs::SimulationDivergedError& err) {
        std::cerr << "error: " << err.what()
                  << " (last valid time: " << err.last_valid_time << " s)\n";
        return kExitDiverged;
    } catch (const ocs::IoError& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const std::filesystem::filesystem_error& err) {
        std::cerr << "error: " << err.what() << '\n';
        return kExitIo;
    } catch (const std::exception& err) {
        // Scenario/config validation and domain errors.
        std::cerr << "error: " << err.what() << '\n';
        return kExitValidation;
    }
    return 0;
}
