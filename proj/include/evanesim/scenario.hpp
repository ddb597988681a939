#pragma once

#include <cctype>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "evanesim/detection.hpp"
#include "evanesim/layered.hpp"
#include "evanesim/pulse.hpp"
#include "evanesim/units.hpp"

namespace evanesim {

/// Full description of one simulation run: pulse, mirror recipe, geometry
/// and discretisation. Loaded from a flat key = value scenario file.
struct Scenario {
  // pulse
  double center_frequency_thz = 0.0;
  double fwhm_bandwidth_thz = 0.0;
  double emission_time_fs = 0.0;
  // stack recipe
  double n_high = 0.0;
  double n_low = 0.0;
  long periods = 0;
  double center_wavelength_nm = 0.0;
  // geometry
  double path_length_mm = 0.0;
  // grids
  long frequency_points = 2049;
  double frequency_half_width_sigmas = 6.0;
  double time_half_span_fs = 150.0;
  double time_step_fs = 0.25;
  double shg_delay_half_span_fs = 60.0;
  double shg_delay_step_fs = 0.25;
  std::string output_dir = "out";

  PulseSpec pulse() const {
    return PulseSpec(center_frequency_thz, fwhm_bandwidth_thz, emission_time_fs);
  }

  Stack stack() const {
    return build_quarter_wave_stack(n_high, n_low, static_cast<std::size_t>(periods),
                                    center_wavelength_nm);
  }

  /// Vacuum flight time T = l/c from the split point to the detectors, fs.
  double retardation_fs() const {
    return path_length_mm / speed_of_light_mm_per_fs;
  }

  double barrier_thickness_nm() const {
    return static_cast<double>(periods) * (center_wavelength_nm / (4.0 * n_high) +
                                           center_wavelength_nm / (4.0 * n_low));
  }

  void validate() const {
    const PulseSpec p = pulse();  // pulse invariants checked by its constructor
    if (periods < 1)
      throw std::domain_error("scenario: periods: need at least one HL period");
    if (!(n_high > 0.0) || !(n_low > 0.0))
      throw std::domain_error("scenario: refractive_index: indices must be positive");
    if (!(center_wavelength_nm > 0.0))
      throw std::domain_error("scenario: center_wavelength: must be positive");
    if (!(path_length_mm > 0.0))
      throw std::domain_error("scenario: path_length: must be positive");
    if (frequency_points < 2)
      throw std::domain_error("scenario: frequency_points: need at least 2");
    if (!(frequency_half_width_sigmas > 0.0))
      throw std::domain_error("scenario: frequency_half_width_sigmas: must be positive");
    if (!(time_half_span_fs > 0.0) || !(time_step_fs > 0.0))
      throw std::domain_error("scenario: time_grid: span and step must be positive");
    if (!(shg_delay_half_span_fs > 0.0) || !(shg_delay_step_fs > 0.0))
      throw std::domain_error("scenario: shg_delay_grid: span and step must be positive");
    if (!(p.omega0() - frequency_half_width_sigmas * p.sigma_omega() > 0.0))
      throw std::domain_error(
          "scenario: frequency_grid_positive: grid would cross omega = 0");
    if (!(retardation_fs() > 10.0 * p.sigma_time()))
      throw std::domain_error(
          "scenario: retardation_margin: path_length must give T = l/c greater "
          "than 10 pulse durations");
    if (!(barrier_thickness_nm() < path_length_mm * 1e6))
      throw std::domain_error(
          "scenario: barrier_fits_path: stack thickness must be below the path "
          "length");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline double parse_number(const std::string& text, const std::string& context) {
  std::size_t consumed = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &consumed);
  } catch (const std::exception&) {
    throw std::invalid_argument(context + ": expected a number, got '" + text + "'");
  }
  if (consumed != text.size())
    throw std::invalid_argument(context + ": trailing characters in '" + text + "'");
  return value;
}

inline long parse_integer(const std::string& text, const std::string& context) {
  const double value = parse_number(text, context);
  if (value != std::floor(value))
    throw std::invalid_argument(context + ": expected an integer, got '" + text + "'");
  return static_cast<long>(value);
}

inline std::string parse_string(const std::string& text, const std::string& context) {
  if (text.size() < 2 || text.front() != '"' || text.back() != '"')
    throw std::invalid_argument(context + ": expected a double-quoted string");
  return text.substr(1, text.size() - 2);
}

}  // namespace detail

/// Parse and validate a scenario file. Lines are `key = value` with optional
/// `#` comments; numbers are plain TOML numbers and strings double-quoted.
/// Grid keys are optional and default to the values above; pulse, stack and
/// geometry keys are required.
inline Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw std::invalid_argument("scenario: cannot open '" + path.string() + "'");

  Scenario scenario;
  std::set<std::string> seen;
  const std::set<std::string> required = {
      "center_frequency_thz", "fwhm_bandwidth_thz", "n_high",        "n_low",
      "periods",              "center_wavelength_nm", "path_length_mm"};

  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = path.filename().string() + ":" + std::to_string(line_no);
    std::string stripped = line;
    // comments start at an unquoted '#'
    bool quoted = false;
    for (std::size_t i = 0; i < stripped.size(); ++i) {
      if (stripped[i] == '"') quoted = !quoted;
      if (stripped[i] == '#' && !quoted) {
        stripped.resize(i);
        break;
      }
    }
    stripped = detail::trim(stripped);
    if (stripped.empty()) continue;

    const std::size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(where + ": expected 'key = value'");
    const std::string key = detail::trim(stripped.substr(0, eq));
    const std::string value = detail::trim(stripped.substr(eq + 1));
    if (key.empty() || value.empty())
      throw std::invalid_argument(where + ": expected 'key = value'");
    if (!seen.insert(key).second)
      throw std::invalid_argument(where + ": duplicate key '" + key + "'");
    const std::string context = where + ": " + key;

    if (key == "center_frequency_thz")
      scenario.center_frequency_thz = detail::parse_number(value, context);
    else if (key == "fwhm_bandwidth_thz")
      scenario.fwhm_bandwidth_thz = detail::parse_number(value, context);
    else if (key == "emission_time_fs")
      scenario.emission_time_fs = detail::parse_number(value, context);
    else if (key == "n_high")
      scenario.n_high = detail::parse_number(value, context);
    else if (key == "n_low")
      scenario.n_low = detail::parse_number(value, context);
    else if (key == "periods")
      scenario.periods = detail::parse_integer(value, context);
    else if (key == "center_wavelength_nm")
      scenario.center_wavelength_nm = detail::parse_number(value, context);
    else if (key == "path_length_mm")
      scenario.path_length_mm = detail::parse_number(value, context);
    else if (key == "frequency_points")
      scenario.frequency_points = detail::parse_integer(value, context);
    else if (key == "frequency_half_width_sigmas")
      scenario.frequency_half_width_sigmas = detail::parse_number(value, context);
    else if (key == "time_half_span_fs")
      scenario.time_half_span_fs = detail::parse_number(value, context);
    else if (key == "time_step_fs")
      scenario.time_step_fs = detail::parse_number(value, context);
    else if (key == "shg_delay_half_span_fs")
      scenario.shg_delay_half_span_fs = detail::parse_number(value, context);
    else if (key == "shg_delay_step_fs")
      scenario.shg_delay_step_fs = detail::parse_number(value, context);
    else if (key == "output_dir")
      scenario.output_dir = detail::parse_string(value, context);
    else
      throw std::invalid_argument(where + ": unknown key '" + key + "'");
  }

  for (const std::string& key : required)
    if (!seen.count(key))
      throw std::invalid_argument("scenario: missing required key '" + key + "' in " +
                                  path.filename().string());

  scenario.validate();
  return scenario;
}

}  // namespace evanesim
