#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "evanesim/detection.hpp"
#include "evanesim/layered.hpp"
#include "evanesim/pulse.hpp"
#include "evanesim/scenario.hpp"
#include "evanesim/units.hpp"

namespace evanesim {

struct GridSettings {
  long frequency_points;
  double frequency_half_width_sigmas;
  double time_half_span_fs;
  double time_step_fs;
  double shg_delay_half_span_fs;
  double shg_delay_step_fs;

  static GridSettings from(const Scenario& s) {
    return {s.frequency_points,    s.frequency_half_width_sigmas,
            s.time_half_span_fs,   s.time_step_fs,
            s.shg_delay_half_span_fs, s.shg_delay_step_fs};
  }
};

/// Everything one run computes, before any file is written.
struct PipelineResult {
  FrequencyGrid frequency_grid;
  BarrierResponse response;
  DetectionCurve reference;
  DetectionCurve barrier;
  DetectionCurve difference;
  ShgResult shg;
  double retardation_fs = 0.0;
  double group_delay_fs = 0.0;
  double nyquist_product = 0.0;
  double head_tail_fraction = 0.0;
};

/// Structured summary of a run; plateau values equal the final samples of
/// the emitted detection curves and delta_p_min is taken over the samples
/// where the reference curve exceeds 1e-12 of its plateau.
struct RunReport {
  Scenario scenario;
  double plateau_reference = 0.0;
  double plateau_barrier = 0.0;
  double plateau_ratio = 0.0;
  double group_delay_fs = 0.0;
  double delta_p_min = 0.0;
  double shg_peak_delay_fs = 0.0;
  long frequency_points = 0;
  double frequency_spacing_rad_fs = 0.0;
  long time_samples = 0;
  double time_step_fs = 0.0;
  double nyquist_product = 0.0;
  double head_tail_fraction = 0.0;
  double shg_window_lo_fs = 0.0;
  double shg_window_hi_fs = 0.0;
  double shg_edge_ratio_reference = 0.0;
  double shg_edge_ratio_barrier = 0.0;
};

/// Minimum of the probability difference over the samples where the
/// reference curve has risen above `threshold` times its plateau.
inline double guarded_difference_minimum(const DetectionCurve& reference,
                                         const DetectionCurve& difference,
                                         double threshold = 1e-12) {
  const double floor = threshold * reference.values.back();
  double minimum = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < difference.values.size(); ++j)
    if (reference.values[j] > floor)
      minimum = std::min(minimum, difference.values[j]);
  return minimum;
}

/// Run the full two-channel computation for one pulse/stack/geometry, with
/// the stack injected directly so trivial barriers (an empty stack, say) can
/// be driven through the identical code path.
inline PipelineResult run_pipeline(const PulseSpec& pulse, const Stack& stack,
                                   double retardation_fs, const GridSettings& grids) {
  FrequencyGrid grid = make_frequency_grid(
      pulse, grids.frequency_half_width_sigmas,
      static_cast<std::size_t>(grids.frequency_points));
  BarrierResponse response = stack_response(stack, grid);

  const TimeGrid times =
      TimeGrid::centered(retardation_fs, grids.time_half_span_fs, grids.time_step_fs);
  DetectionCurve reference = reference_probability(pulse, grid, retardation_fs, times);
  DetectionCurve barrier = barrier_probability(pulse, grid, response, retardation_fs, times);
  DetectionCurve difference = probability_difference(reference, barrier);

  const TimeGrid delays =
      TimeGrid::centered(0.0, grids.shg_delay_half_span_fs, grids.shg_delay_step_fs);
  ShgResult shg =
      shg_coincidence_detailed(pulse, grid, &response, retardation_fs, delays);

  PipelineResult result{std::move(grid),    std::move(response), std::move(reference),
                        std::move(barrier), std::move(difference), std::move(shg)};
  result.retardation_fs = retardation_fs;
  result.group_delay_fs = group_delay(result.response, pulse);
  const double reach = std::max(std::abs(times.front() - retardation_fs),
                                std::abs(times.back() - retardation_fs));
  result.nyquist_product = result.frequency_grid.spacing() * reach;
  result.head_tail_fraction =
      0.5 * std::erfc(pulse.sigma_omega() * (retardation_fs - times.front()));
  return result;
}

namespace detail {

inline std::string format_full(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%.17g", value);
  return buffer;
}

inline std::string format_compact(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof buffer, "%g", value);
  return buffer;
}

/// Removes every file noted so far unless release() was called, so a failed
/// run does not leave partial outputs behind.
class EmissionGuard {
 public:
  ~EmissionGuard() {
    if (released_) return;
    std::error_code ec;
    for (const auto& path : written_) std::filesystem::remove(path, ec);
  }
  void note(const std::filesystem::path& path) { written_.push_back(path); }
  void release() { released_ = true; }

 private:
  std::vector<std::filesystem::path> written_;
  bool released_ = false;
};

inline std::ofstream open_output(const std::filesystem::path& path,
                                 EmissionGuard& guard) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  guard.note(path);
  return out;
}

inline void write_response_csv(const std::filesystem::path& path,
                               const PulseSpec& pulse, const BarrierResponse& response,
                               EmissionGuard& guard) {
  auto out = open_output(path, guard);
  out << "frequency_THz,B,phase_over_2pi,f_normalized\n";
  for (std::size_t k = 0; k < response.grid.size(); ++k) {
    const double omega = response.grid[k];
    out << format_full(thz_from_angular(omega)) << ','
        << format_full(response.magnitude[k]) << ','
        << format_full(response.phase[k] / two_pi) << ','
        << format_full(gaussian_spectrum(pulse, omega)) << '\n';
  }
}

inline void write_detection_csv(const std::filesystem::path& path,
                                const PipelineResult& result, EmissionGuard& guard) {
  auto out = open_output(path, guard);
  out << "t_minus_T_fs,P_ref,P_barrier,delta_P\n";
  for (std::size_t j = 0; j < result.reference.grid.size(); ++j) {
    out << format_full(result.reference.grid[j] - result.retardation_fs) << ','
        << format_full(result.reference.values[j]) << ','
        << format_full(result.barrier.values[j]) << ','
        << format_full(result.difference.values[j]) << '\n';
  }
}

inline void write_shg_csv(const std::filesystem::path& path, const ShgResult& shg,
                          EmissionGuard& guard) {
  auto out = open_output(path, guard);
  out << "delay_fs,coincidence_normalized\n";
  for (std::size_t j = 0; j < shg.curve.grid.size(); ++j)
    out << format_full(shg.curve.grid[j]) << ','
        << format_full(shg.curve.values[j]) << '\n';
}

inline nlohmann::ordered_json scenario_to_json(const Scenario& s) {
  nlohmann::ordered_json j;
  j["center_frequency_thz"] = s.center_frequency_thz;
  j["fwhm_bandwidth_thz"] = s.fwhm_bandwidth_thz;
  j["emission_time_fs"] = s.emission_time_fs;
  j["n_high"] = s.n_high;
  j["n_low"] = s.n_low;
  j["periods"] = s.periods;
  j["center_wavelength_nm"] = s.center_wavelength_nm;
  j["path_length_mm"] = s.path_length_mm;
  j["frequency_points"] = s.frequency_points;
  j["frequency_half_width_sigmas"] = s.frequency_half_width_sigmas;
  j["time_half_span_fs"] = s.time_half_span_fs;
  j["time_step_fs"] = s.time_step_fs;
  j["shg_delay_half_span_fs"] = s.shg_delay_half_span_fs;
  j["shg_delay_step_fs"] = s.shg_delay_step_fs;
  j["output_dir"] = s.output_dir;
  return j;
}

inline void write_report_json(const std::filesystem::path& path, const RunReport& report,
                              EmissionGuard& guard) {
  nlohmann::ordered_json j;
  j["scenario"] = scenario_to_json(report.scenario);
  j["plateau_reference"] = report.plateau_reference;
  j["plateau_barrier"] = report.plateau_barrier;
  j["plateau_ratio"] = report.plateau_ratio;
  j["group_delay_fs"] = report.group_delay_fs;
  j["delta_p_min"] = report.delta_p_min;
  j["shg_peak_delay_fs"] = report.shg_peak_delay_fs;
  nlohmann::ordered_json c;
  c["frequency_points"] = report.frequency_points;
  c["frequency_spacing_rad_fs"] = report.frequency_spacing_rad_fs;
  c["time_samples"] = report.time_samples;
  c["time_step_fs"] = report.time_step_fs;
  c["nyquist_product"] = report.nyquist_product;
  c["head_tail_fraction"] = report.head_tail_fraction;
  c["shg_window_lo_fs"] = report.shg_window_lo_fs;
  c["shg_window_hi_fs"] = report.shg_window_hi_fs;
  c["shg_edge_ratio_reference"] = report.shg_edge_ratio_reference;
  c["shg_edge_ratio_barrier"] = report.shg_edge_ratio_barrier;
  j["convergence"] = c;
  auto out = open_output(path, guard);
  out << j.dump(2) << '\n';
}

inline constexpr const char* plot_response_py = R"PY(#!/usr/bin/env python3
"""Plot the mirror transmission magnitude, phase and pulse spectrum."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

nu, mag, phase, spectrum = [], [], [], []
with open("response.csv", newline="") as f:
    for row in csv.DictReader(f):
        nu.append(float(row["frequency_THz"]))
        mag.append(float(row["B"]))
        phase.append(float(row["phase_over_2pi"]))
        spectrum.append(float(row["f_normalized"]))

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(nu, mag, "k-", label="B")
ax.plot(nu, spectrum, "b-.", label="f (normalized)")
ax.set_xlabel("frequency (THz)")
ax.set_ylabel("magnitude")
ax2 = ax.twinx()
ax2.plot(nu, phase, "r--", label="phase / 2pi")
ax2.set_ylabel("phase / 2pi")
lines = ax.get_lines() + ax2.get_lines()
ax.legend(lines, [line.get_label() for line in lines], loc="upper right")
fig.tight_layout()
fig.savefig("response.png", dpi=160)
print("wrote response.png")
)PY";

inline constexpr const char* plot_detection_py = R"PY(#!/usr/bin/env python3
"""Plot the two-channel photoionization probability curves."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

t, p_ref, p_bar = [], [], []
with open("detection.csv", newline="") as f:
    for row in csv.DictReader(f):
        t.append(float(row["t_minus_T_fs"]))
        p_ref.append(float(row["P_ref"]))
        p_bar.append(float(row["P_barrier"]))

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.semilogy(t, p_ref, "b-", label="reference channel")
ax.semilogy(t, p_bar, "r--", label="barrier channel")
ax.set_xlabel("t - T (fs)")
ax.set_ylabel("P(t) / alpha")
ax.legend()
fig.tight_layout()
fig.savefig("detection.png", dpi=160)
print("wrote detection.png")
)PY";

inline constexpr const char* plot_shg_py = R"PY(#!/usr/bin/env python3
"""Plot the normalised SHG coincidence signal versus relative delay."""
import csv

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

delay, signal = [], []
with open("shg.csv", newline="") as f:
    for row in csv.DictReader(f):
        delay.append(float(row["delay_fs"]))
        signal.append(float(row["coincidence_normalized"]))

fig, ax = plt.subplots(figsize=(7, 4.5))
ax.plot(delay, signal, "k-")
ax.set_xlabel("relative delay (fs)")
ax.set_ylabel("SHG coincidence (normalized)")
fig.tight_layout()
fig.savefig("shg.png", dpi=160)
print("wrote shg.png")
)PY";

inline void write_plot_script(const std::filesystem::path& path, const char* body,
                              EmissionGuard& guard) {
  auto out = open_output(path, guard);
  out << body;
}

}  // namespace detail

inline RunReport make_report(const Scenario& scenario, const PipelineResult& result) {
  RunReport report;
  report.scenario = scenario;
  report.plateau_reference = result.reference.values.back();
  report.plateau_barrier = result.barrier.values.back();
  report.plateau_ratio = report.plateau_reference / report.plateau_barrier;
  report.group_delay_fs = result.group_delay_fs;
  report.delta_p_min = guarded_difference_minimum(result.reference, result.difference);
  report.shg_peak_delay_fs = result.shg.peak_delay_fs;
  report.frequency_points = static_cast<long>(result.frequency_grid.size());
  report.frequency_spacing_rad_fs = result.frequency_grid.spacing();
  report.time_samples = static_cast<long>(result.reference.grid.size());
  report.time_step_fs = result.reference.grid.spacing();
  report.nyquist_product = result.nyquist_product;
  report.head_tail_fraction = result.head_tail_fraction;
  report.shg_window_lo_fs = result.shg.window_lo_fs;
  report.shg_window_hi_fs = result.shg.window_hi_fs;
  report.shg_edge_ratio_reference = result.shg.edge_ratio_reference;
  report.shg_edge_ratio_barrier = result.shg.edge_ratio_barrier;
  return report;
}

/// Run the scenario and emit response.csv, detection.csv, shg.csv,
/// report.json and one plot script per CSV into its output directory.
/// Partial outputs are removed if anything fails.
inline RunReport run_reproduction(const Scenario& scenario) {
  scenario.validate();
  const PipelineResult result = run_pipeline(scenario.pulse(), scenario.stack(),
                                             scenario.retardation_fs(),
                                             GridSettings::from(scenario));
  const RunReport report = make_report(scenario, result);

  const std::filesystem::path dir(scenario.output_dir);
  std::filesystem::create_directories(dir);
  detail::EmissionGuard guard;
  detail::write_response_csv(dir / "response.csv", scenario.pulse(), result.response,
                             guard);
  detail::write_detection_csv(dir / "detection.csv", result, guard);
  detail::write_shg_csv(dir / "shg.csv", result.shg, guard);
  detail::write_report_json(dir / "report.json", report, guard);
  detail::write_plot_script(dir / "plot_response.py", detail::plot_response_py, guard);
  detail::write_plot_script(dir / "plot_detection.py", detail::plot_detection_py, guard);
  detail::write_plot_script(dir / "plot_shg.py", detail::plot_shg_py, guard);
  guard.release();
  return report;
}

enum class SweepParameter { periods, fwhm_bandwidth, center_wavelength };

inline SweepParameter parse_sweep_parameter(const std::string& name) {
  if (name == "periods") return SweepParameter::periods;
  if (name == "fwhm_bandwidth") return SweepParameter::fwhm_bandwidth;
  if (name == "center_wavelength") return SweepParameter::center_wavelength;
  throw std::invalid_argument(
      "sweep: unknown parameter '" + name +
      "' (expected periods, fwhm_bandwidth or center_wavelength)");
}

/// One reproduction run per value, each in <output_dir>/<param>_<value>/,
/// plus a sweep_summary.csv. An empty value list produces no reports and no
/// files.
inline std::vector<RunReport> sweep(const Scenario& base, const std::string& parameter,
                                    const std::vector<double>& values) {
  const SweepParameter param = parse_sweep_parameter(parameter);
  std::vector<RunReport> reports;
  if (values.empty()) return reports;

  for (const double value : values) {
    Scenario scenario = base;
    switch (param) {
      case SweepParameter::periods:
        if (value != std::floor(value) || value < 1.0)
          throw std::invalid_argument("sweep: periods values must be positive integers");
        scenario.periods = static_cast<long>(value);
        break;
      case SweepParameter::fwhm_bandwidth:
        scenario.fwhm_bandwidth_thz = value;
        break;
      case SweepParameter::center_wavelength:
        scenario.center_wavelength_nm = value;
        break;
    }
    scenario.output_dir = (std::filesystem::path(base.output_dir) /
                           (parameter + "_" + detail::format_compact(value)))
                              .string();
    reports.push_back(run_reproduction(scenario));
  }

  const std::filesystem::path dir(base.output_dir);
  std::filesystem::create_directories(dir);
  detail::EmissionGuard guard;
  auto out = detail::open_output(dir / "sweep_summary.csv", guard);
  out << "parameter,value,plateau_reference,plateau_barrier,plateau_ratio,"
         "group_delay_fs,delta_p_min,shg_peak_delay_fs\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const RunReport& r = reports[i];
    out << parameter << ',' << detail::format_full(values[i]) << ','
        << detail::format_full(r.plateau_reference) << ','
        << detail::format_full(r.plateau_barrier) << ','
        << detail::format_full(r.plateau_ratio) << ','
        << detail::format_full(r.group_delay_fs) << ','
        << detail::format_full(r.delta_p_min) << ','
        << detail::format_full(r.shg_peak_delay_fs) << '\n';
  }
  out.close();
  guard.release();
  return reports;
}

}  // namespace evanesim
