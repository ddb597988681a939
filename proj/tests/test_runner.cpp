#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include <json.hpp>

#include "evanesim/runner.hpp"
#include "fixtures.hpp"

using Catch::Matchers::WithinRel;
using namespace evanesim;

namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "evanesim_runner_tests" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string first_line(const std::string& text) {
  return text.substr(0, text.find('\n'));
}

// stock physics on grids sized for fast tests
Scenario slim_scenario(const fs::path& out_dir) {
  Scenario s = fixtures::stock_scenario();
  s.frequency_points = 513;
  s.time_step_fs = 0.5;
  s.shg_delay_half_span_fs = 20.0;
  s.shg_delay_step_fs = 0.5;
  s.output_dir = out_dir.string();
  return s;
}

int run_cli(const std::string& args) {
  const std::string command =
      std::string(EVANESIM_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("an empty stack gives two identical channels") {
  const Scenario s = slim_scenario("unused");
  const PipelineResult result =
      run_pipeline(s.pulse(), Stack{}, s.retardation_fs(), GridSettings::from(s));
  CHECK(result.barrier.values == result.reference.values);
  CHECK(result.reference.values.back() / result.barrier.values.back() == 1.0);
  for (double v : result.difference.values) CHECK(v == 0.0);
}

TEST_CASE("reproduction emits the full file set") {
  const fs::path dir = fresh_dir("fileset");
  const RunReport report = run_reproduction(slim_scenario(dir));
  for (const char* name : {"response.csv", "detection.csv", "shg.csv", "report.json",
                           "plot_response.py", "plot_detection.py", "plot_shg.py"})
    CHECK(fs::exists(dir / name));
  CHECK(report.plateau_ratio > 1.0);
}

TEST_CASE("csv schemas are stable") {
  const fs::path dir = fresh_dir("schema");
  run_reproduction(slim_scenario(dir));
  CHECK(first_line(slurp(dir / "response.csv")) ==
        "frequency_THz,B,phase_over_2pi,f_normalized");
  CHECK(first_line(slurp(dir / "detection.csv")) ==
        "t_minus_T_fs,P_ref,P_barrier,delta_P");
  CHECK(first_line(slurp(dir / "shg.csv")) == "delay_fs,coincidence_normalized");
}

TEST_CASE("repeated runs produce byte-identical outputs") {
  const fs::path dir = fresh_dir("determinism");
  const Scenario s = slim_scenario(dir);
  run_reproduction(s);
  const std::string response = slurp(dir / "response.csv");
  const std::string detection = slurp(dir / "detection.csv");
  const std::string shg = slurp(dir / "shg.csv");
  const std::string report = slurp(dir / "report.json");
  run_reproduction(s);
  CHECK(slurp(dir / "response.csv") == response);
  CHECK(slurp(dir / "detection.csv") == detection);
  CHECK(slurp(dir / "shg.csv") == shg);
  CHECK(slurp(dir / "report.json") == report);
}

TEST_CASE("report plateaus equal the final samples of the emitted curves") {
  const fs::path dir = fresh_dir("consistency");
  run_reproduction(slim_scenario(dir));

  const auto report = nlohmann::json::parse(slurp(dir / "report.json"));

  const std::string detection = slurp(dir / "detection.csv");
  const std::size_t last_break = detection.rfind('\n', detection.size() - 2);
  std::istringstream last_row(detection.substr(last_break + 1));
  std::string cell;
  std::vector<double> cells;
  while (std::getline(last_row, cell, ',')) cells.push_back(std::stod(cell));
  REQUIRE(cells.size() == 4);

  CHECK(report["plateau_reference"].get<double>() == cells[1]);
  CHECK(report["plateau_barrier"].get<double>() == cells[2]);
  CHECK(report["plateau_ratio"].get<double>() ==
        cells[1] / cells[2]);
  CHECK(report["convergence"]["frequency_points"].get<long>() == 513);
}

TEST_CASE("failed runs leave no partial outputs") {
  const fs::path dir = fresh_dir("cleanup");
  const fs::path blocking = dir / "blocked";
  std::ofstream(blocking) << "not a directory";
  Scenario s = slim_scenario(blocking / "out");
  CHECK_THROWS(run_reproduction(s));
  CHECK(!fs::exists(blocking / "out" / "response.csv"));
}

TEST_CASE("sweeping the period count raises the plateau ratio monotonically") {
  const fs::path dir = fresh_dir("sweep_periods");
  const std::vector<double> values = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
  const auto reports = sweep(slim_scenario(dir), "periods", values);
  REQUIRE(reports.size() == values.size());
  for (std::size_t i = 1; i < reports.size(); ++i)
    CHECK(reports[i].plateau_ratio > reports[i - 1].plateau_ratio);
  CHECK(fs::exists(dir / "sweep_summary.csv"));
  CHECK(first_line(slurp(dir / "sweep_summary.csv")) ==
        "parameter,value,plateau_reference,plateau_barrier,plateau_ratio,"
        "group_delay_fs,delta_p_min,shg_peak_delay_fs");
  CHECK(fs::exists(dir / "periods_3" / "detection.csv"));
}

TEST_CASE("a single-value sweep reproduces the plain run") {
  const fs::path sweep_dir = fresh_dir("sweep_single");
  const fs::path run_dir = fresh_dir("sweep_single_direct");
  const auto reports = sweep(slim_scenario(sweep_dir), "fwhm_bandwidth", {28.0});
  REQUIRE(reports.size() == 1);
  const RunReport direct = run_reproduction(slim_scenario(run_dir));
  CHECK(reports[0].plateau_ratio == direct.plateau_ratio);
  CHECK(reports[0].group_delay_fs == direct.group_delay_fs);
  CHECK(slurp(sweep_dir / "fwhm_bandwidth_28" / "detection.csv") ==
        slurp(run_dir / "detection.csv"));
  CHECK(slurp(sweep_dir / "fwhm_bandwidth_28" / "response.csv") ==
        slurp(run_dir / "response.csv"));
}

TEST_CASE("an empty sweep produces nothing") {
  const fs::path dir = fs::temp_directory_path() / "evanesim_runner_tests" / "sweep_empty";
  fs::remove_all(dir);
  Scenario s = fixtures::stock_scenario();
  s.output_dir = dir.string();
  const auto reports = sweep(s, "periods", {});
  CHECK(reports.empty());
  CHECK(!fs::exists(dir));
}

TEST_CASE("unknown sweep parameters are rejected") {
  CHECK_THROWS_AS(sweep(fixtures::stock_scenario(), "thickness", {1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(sweep(fixtures::stock_scenario(), "periods", {2.5}),
                  std::invalid_argument);
}

TEST_CASE("cli validate accepts the shipped scenario") {
  const std::string scenario =
      (fs::path(EVANESIM_SOURCE_DIR) / "scenarios" / "default.toml").string();
  CHECK(run_cli("validate " + scenario) == 0);
}

TEST_CASE("cli validate rejects a broken scenario with exit code 2") {
  const fs::path dir = fresh_dir("cli_bad");
  const fs::path bad = dir / "bad.toml";
  std::ofstream(bad) << "center_frequency_thz = 375.0\nfwhm_bandwidth_thz = 400.0\n"
                        "n_high = 2.4\nn_low = 1.46\nperiods = 11\n"
                        "center_wavelength_nm = 800.0\npath_length_mm = 0.3\n";
  CHECK(run_cli("validate " + bad.string()) == 2);
  CHECK(run_cli("validate " + (dir / "missing.toml").string()) == 2);
}

TEST_CASE("cli run reports numeric failures with exit code 3") {
  const fs::path dir = fresh_dir("cli_numeric");
  const fs::path scenario = dir / "aliasing.toml";
  std::ofstream(scenario) << "center_frequency_thz = 375.0\nfwhm_bandwidth_thz = 28.0\n"
                             "n_high = 2.4\nn_low = 1.46\nperiods = 11\n"
                             "center_wavelength_nm = 800.0\npath_length_mm = 0.3\n"
                             "frequency_points = 257\ntime_half_span_fs = 5000.0\n";
  CHECK(run_cli("run " + scenario.string() + " --out " + (dir / "out").string()) == 3);
}

TEST_CASE("cli run emits outputs into the requested directory") {
  const fs::path dir = fresh_dir("cli_run");
  const fs::path scenario = dir / "slim.toml";
  std::ofstream(scenario) << "center_frequency_thz = 375.0\nfwhm_bandwidth_thz = 28.0\n"
                             "n_high = 2.4\nn_low = 1.46\nperiods = 11\n"
                             "center_wavelength_nm = 800.0\npath_length_mm = 0.3\n"
                             "frequency_points = 513\ntime_step_fs = 0.5\n"
                             "shg_delay_half_span_fs = 20.0\nshg_delay_step_fs = 0.5\n";
  CHECK(run_cli("run " + scenario.string() + " --out " + (dir / "out").string()) == 0);
  CHECK(fs::exists(dir / "out" / "report.json"));
  CHECK(run_cli("sweep " + scenario.string() + " --param periods --values 2,3 --out " +
                (dir / "sweep").string()) == 0);
  CHECK(fs::exists(dir / "sweep" / "sweep_summary.csv"));
  CHECK(run_cli("sweep " + scenario.string() + " --param nope --values 2 --out " +
                (dir / "sweep2").string()) == 2);
}
