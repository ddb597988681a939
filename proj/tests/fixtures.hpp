#pragma once

// Shared fixtures for the unit and acceptance suites: the stock scenario
// (375 THz / 28 THz pulse, (HL)^11 TiO2/SiO2 mirror at 800 nm, 0.3 mm arms)
// plus synthetic barrier responses and random lossless stacks.

#include <cmath>
#include <complex>
#include <cstddef>
#include <optional>
#include <random>

#include "evanesim/evanesim.hpp"

namespace fixtures {

inline evanesim::PulseSpec stock_pulse() { return {375.0, 28.0}; }

inline evanesim::Stack stock_stack() {
  return evanesim::build_quarter_wave_stack(2.4, 1.46, 11, 800.0);
}

/// Same recipe with the quarter-wave condition met exactly at the pulse
/// centre frequency.
inline evanesim::Stack matched_stack() {
  const double lambda =
      evanesim::two_pi * evanesim::speed_of_light_nm_per_fs / stock_pulse().omega0();
  return evanesim::build_quarter_wave_stack(2.4, 1.46, 11, lambda);
}

inline evanesim::FrequencyGrid stock_grid() {
  return evanesim::make_frequency_grid(stock_pulse(), 6.0, 2049);
}

inline double stock_retardation_fs() {
  return 0.3 / evanesim::speed_of_light_mm_per_fs;  // 0.3 mm arms
}

inline evanesim::TimeGrid stock_time_grid() {
  return evanesim::TimeGrid::centered(stock_retardation_fs(), 150.0, 0.25);
}

inline evanesim::Scenario stock_scenario() {
  evanesim::Scenario s;
  s.center_frequency_thz = 375.0;
  s.fwhm_bandwidth_thz = 28.0;
  s.n_high = 2.4;
  s.n_low = 1.46;
  s.periods = 11;
  s.center_wavelength_nm = 800.0;
  s.path_length_mm = 0.3;
  return s;
}

/// Barrier that only delays: tau = exp(i omega delay), |tau| = 1.
inline evanesim::BarrierResponse pure_delay_response(const evanesim::FrequencyGrid& grid,
                                                     double delay_fs) {
  evanesim::BarrierResponse r{grid, {}, {}, {}, {}};
  const std::size_t n = grid.size();
  r.tau.resize(n);
  r.rho.assign(n, {0.0, 0.0});
  r.magnitude.assign(n, 1.0);
  r.phase.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    r.phase[k] = grid[k] * delay_fs;
    r.tau[k] = std::polar(1.0, r.phase[k]);
  }
  return r;
}

/// Fully opaque barrier: tau = 0 everywhere.
inline evanesim::BarrierResponse opaque_response(const evanesim::FrequencyGrid& grid) {
  evanesim::BarrierResponse r{grid, {}, {}, {}, {}};
  const std::size_t n = grid.size();
  r.tau.assign(n, {0.0, 0.0});
  r.rho.assign(n, {1.0, 0.0});
  r.magnitude.assign(n, 0.0);
  r.phase.assign(n, 0.0);
  return r;
}

/// Random lossless stack: 1..30 layers, indices in [1, 4], thicknesses in
/// [10, 500] nm.
inline evanesim::Stack random_stack(std::mt19937& rng) {
  std::uniform_int_distribution<std::size_t> layer_count(1, 30);
  std::uniform_real_distribution<double> index(1.0, 4.0);
  std::uniform_real_distribution<double> thickness(10.0, 500.0);
  evanesim::Stack stack;
  const std::size_t n = layer_count(rng);
  stack.layers.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    stack.layers.emplace_back(index(rng), thickness(rng));
  return stack;
}

/// Random stopband stack for the difference-positivity harness: a jittered
/// quarter-wave mirror, accepted only when its transmission magnitude stays
/// below max_band_magnitude across |omega - omega0| <= 3 sigma.
inline std::optional<evanesim::Stack> random_stopband_stack(
    std::mt19937& rng, const evanesim::PulseSpec& pulse,
    const evanesim::FrequencyGrid& grid, double max_band_magnitude = 0.1) {
  std::uniform_real_distribution<double> high(2.2, 3.8);
  std::uniform_real_distribution<double> contrast(1.5, 2.2);
  std::uniform_int_distribution<std::size_t> period_count(9, 15);
  std::uniform_real_distribution<double> detune(0.96, 1.04);
  std::uniform_real_distribution<double> jitter(0.95, 1.05);

  const double n_high = high(rng);
  const double n_low = std::max(1.0, n_high / contrast(rng));
  const double lambda =
      detune(rng) * evanesim::two_pi * evanesim::speed_of_light_nm_per_fs / pulse.omega0();
  evanesim::Stack stack;
  const std::size_t periods = period_count(rng);
  stack.layers.reserve(2 * periods);
  for (std::size_t p = 0; p < periods; ++p) {
    stack.layers.emplace_back(n_high, jitter(rng) * lambda / (4.0 * n_high));
    stack.layers.emplace_back(n_low, jitter(rng) * lambda / (4.0 * n_low));
  }

  const evanesim::BarrierResponse response = evanesim::stack_response(stack, grid);
  const double omega0 = pulse.omega0();
  const double band = 3.0 * pulse.sigma_omega();
  for (std::size_t k = 0; k < grid.size(); ++k)
    if (std::abs(grid[k] - omega0) <= band &&
        response.magnitude[k] >= max_band_magnitude)
      return std::nullopt;
  return stack;
}

}  // namespace fixtures
