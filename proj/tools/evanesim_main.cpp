#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evanesim/evanesim.hpp"

namespace {

constexpr int exit_validation_failure = 2;
constexpr int exit_numeric_failure = 3;

void print_report(const evanesim::RunReport& report) {
  std::printf("plateau  reference   %.6g\n", report.plateau_reference);
  std::printf("plateau  barrier     %.6g\n", report.plateau_barrier);
  std::printf("plateau  ratio       %.6g\n", report.plateau_ratio);
  std::printf("group delay          %.4g fs\n", report.group_delay_fs);
  std::printf("SHG peak delay       %.4g fs\n", report.shg_peak_delay_fs);
  std::printf("min delta_P (guarded) %.6g\n", report.delta_p_min);
}

int run_command(const std::string& scenario_path, const std::string& out_override) {
  evanesim::Scenario scenario = evanesim::load_scenario(scenario_path);
  if (!out_override.empty()) scenario.output_dir = out_override;
  const evanesim::RunReport report = evanesim::run_reproduction(scenario);
  print_report(report);
  std::printf("outputs in           %s\n", scenario.output_dir.c_str());
  return 0;
}

int sweep_command(const std::string& scenario_path, const std::string& out_override,
                  const std::string& parameter, const std::vector<double>& values) {
  evanesim::Scenario scenario = evanesim::load_scenario(scenario_path);
  if (!out_override.empty()) scenario.output_dir = out_override;
  const auto reports = evanesim::sweep(scenario, parameter, values);
  if (reports.empty()) {
    std::printf("no sweep values given; nothing to do\n");
    return 0;
  }
  std::printf("%-20s %-14s %-14s %-12s\n", "value", "plateau_ratio", "group_delay_fs",
              "delta_p_min");
  for (std::size_t i = 0; i < reports.size(); ++i)
    std::printf("%-20g %-14.6g %-14.4g %-12.6g\n", values[i],
                reports[i].plateau_ratio, reports[i].group_delay_fs,
                reports[i].delta_p_min);
  std::printf("outputs in           %s\n", scenario.output_dir.c_str());
  return 0;
}

int validate_command(const std::string& scenario_path) {
  const evanesim::Scenario scenario = evanesim::load_scenario(scenario_path);
  std::printf("scenario OK: %g THz pulse (%g THz FWHM), (HL)^%ld stack at %g nm, "
              "path %g mm\n",
              scenario.center_frequency_thz, scenario.fwhm_bandwidth_thz,
              scenario.periods, scenario.center_wavelength_nm,
              scenario.path_length_mm);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"evanesim: two-channel pulse photodetection through a dielectric "
               "mirror"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_override;
  std::string parameter;
  std::vector<double> values;

  CLI::App* run = app.add_subcommand("run", "run a scenario and emit figure data");
  run->add_option("scenario", scenario_path, "scenario file")->required();
  run->add_option("--out", out_override, "output directory (overrides output_dir)");

  CLI::App* sweep = app.add_subcommand("sweep", "run a scenario over parameter values");
  sweep->add_option("scenario", scenario_path, "scenario file")->required();
  sweep->add_option("--out", out_override, "output directory (overrides output_dir)");
  sweep->add_option("--param", parameter,
                    "parameter: periods, fwhm_bandwidth or center_wavelength")
      ->required();
  sweep->add_option("--values", values, "comma-separated values")->delimiter(',');

  CLI::App* validate = app.add_subcommand("validate", "parse and validate a scenario");
  validate->add_option("scenario", scenario_path, "scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_validation_failure;
  }

  try {
    if (run->parsed()) return run_command(scenario_path, out_override);
    if (sweep->parsed()) return sweep_command(scenario_path, out_override, parameter, values);
    return validate_command(scenario_path);
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_validation_failure;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_numeric_failure;
  }
}
