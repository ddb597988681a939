#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "evanesim/errors.hpp"
#include "evanesim/numerics.hpp"
#include "evanesim/pulse.hpp"
#include "evanesim/units.hpp"

namespace evanesim {

/// One lossless dielectric layer: real refractive index, physical thickness.
struct Layer {
  double refractive_index;
  double thickness_nm;

  Layer(double index, double thickness)
      : refractive_index(index), thickness_nm(thickness) {
    if (!(refractive_index > 0.0))
      throw std::domain_error("Layer: refractive index must be positive");
    if (thickness_nm < 0.0)
      throw std::domain_error("Layer: thickness must be non-negative");
  }
};

/// Ordered layer stack (entrance to exit) embedded in a uniform surround
/// medium on both sides. The exit plane is derived from the entrance plane
/// and the layer thicknesses, so x2 - x1 = total thickness always holds.
struct Stack {
  std::vector<Layer> layers;
  double surround_index = 1.0;
  double entrance_position_nm = 0.0;

  double total_thickness_nm() const {
    double d = 0.0;
    for (const Layer& layer : layers) d += layer.thickness_nm;
    return d;
  }

  double exit_position_nm() const {
    return entrance_position_nm + total_thickness_nm();
  }
};

/// Sampled complex transmission tau and reflection rho of a stack, with the
/// decomposition tau = magnitude * exp(i * phase). The phase is unwrapped by
/// continuity along the grid and anchored so that phase at the grid centre
/// lies in (-pi, pi].
struct BarrierResponse {
  FrequencyGrid grid;
  std::vector<std::complex<double>> tau;
  std::vector<std::complex<double>> rho;
  std::vector<double> magnitude;
  std::vector<double> phase;
};

/// 2x2 complex characteristic matrix of a layer section; unimodular for
/// lossless media.
struct CharacteristicMatrix {
  std::complex<double> m00{1.0}, m01{0.0}, m10{0.0}, m11{1.0};

  CharacteristicMatrix operator*(const CharacteristicMatrix& r) const {
    CharacteristicMatrix out;
    out.m00 = m00 * r.m00 + m01 * r.m10;
    out.m01 = m00 * r.m01 + m01 * r.m11;
    out.m10 = m10 * r.m00 + m11 * r.m10;
    out.m11 = m10 * r.m01 + m11 * r.m11;
    return out;
  }

  std::complex<double> determinant() const { return m00 * m11 - m01 * m10; }
};

/// Quarter-wave stack (HL)^periods: alternating high/low index layers, each
/// an optical quarter of center_wavelength thick, in vacuum surround.
inline Stack build_quarter_wave_stack(double n_high, double n_low,
                                      std::size_t periods,
                                      double center_wavelength_nm) {
  if (!(n_high > 0.0) || !(n_low > 0.0))
    throw std::domain_error("build_quarter_wave_stack: indices must be positive");
  if (periods < 1)
    throw std::domain_error("build_quarter_wave_stack: need at least 1 period");
  if (!(center_wavelength_nm > 0.0))
    throw std::domain_error("build_quarter_wave_stack: wavelength must be positive");
  Stack stack;
  stack.layers.reserve(2 * periods);
  for (std::size_t p = 0; p < periods; ++p) {
    stack.layers.emplace_back(n_high, center_wavelength_nm / (4.0 * n_high));
    stack.layers.emplace_back(n_low, center_wavelength_nm / (4.0 * n_low));
  }
  return stack;
}

/// Characteristic matrix of a single layer at angular frequency omega
/// (normal incidence, e^{-i omega t} time convention):
///
///   [ cos d        -(i/p) sin d ]          d = n * omega * thickness / c,
///   [ -i p sin d    cos d       ]          p = n.
inline CharacteristicMatrix characteristic_matrix(const Layer& layer,
                                                  double omega_rad_fs) {
  if (!(omega_rad_fs > 0.0))
    throw std::domain_error("characteristic_matrix: omega must be positive");
  const double delta =
      layer.refractive_index * omega_rad_fs * layer.thickness_nm / speed_of_light_nm_per_fs;
  const double c = std::cos(delta);
  const double s = std::sin(delta);
  const double p = layer.refractive_index;
  CharacteristicMatrix m;
  m.m00 = c;
  m.m01 = std::complex<double>(0.0, -s / p);
  m.m10 = std::complex<double>(0.0, -p * s);
  m.m11 = c;
  return m;
}

namespace detail {

inline void unwrap_and_anchor_phase(std::vector<double>& phase,
                                    std::size_t anchor_index) {
  for (std::size_t k = 1; k < phase.size(); ++k) {
    const double jump = std::round((phase[k - 1] - phase[k]) / two_pi);
    phase[k] += two_pi * jump;
  }
  const double anchor = phase[anchor_index];
  const double turns = std::floor((anchor + pi) / two_pi);
  if (turns != 0.0)
    for (double& value : phase) value -= two_pi * turns;
}

}  // namespace detail

/// Complex transmission and reflection of a stack on a frequency grid, via
/// the product of layer characteristic matrices. tau is referenced between
/// the entrance and exit planes of the stack; free propagation across its
/// thickness is not divided out.
inline BarrierResponse stack_response(const Stack& stack, const FrequencyGrid& grid) {
  const std::size_t n = grid.size();
  BarrierResponse response{grid, {}, {}, {}, {}};
  response.tau.resize(n);
  response.rho.resize(n);
  response.magnitude.resize(n);
  response.phase.resize(n);

  const double p0 = stack.surround_index;
  if (!(p0 > 0.0))
    throw std::domain_error("stack_response: surround index must be positive");

  for (std::size_t k = 0; k < n; ++k) {
    CharacteristicMatrix m;
    for (const Layer& layer : stack.layers)
      m = m * characteristic_matrix(layer, grid[k]);
    const std::complex<double> a = p0 * m.m00 + p0 * p0 * m.m01;
    const std::complex<double> b = m.m10 + p0 * m.m11;
    const std::complex<double> denom = a + b;
    if (std::abs(denom) < 1e-300)
      throw numeric_error("stack_response: vanishing admittance denominator");
    response.tau[k] = 2.0 * p0 / denom;
    response.rho[k] = (a - b) / denom;
    response.magnitude[k] = std::abs(response.tau[k]);
    response.phase[k] = std::arg(response.tau[k]);
  }
  detail::unwrap_and_anchor_phase(response.phase, grid.center_index());
  return response;
}

/// Slope of the transmission phase at the pulse centre, estimated by a
/// least-squares line over |omega - omega0| <= sigma. This is the apparent
/// traversal delay of the transmitted envelope, in fs.
inline double group_delay(const BarrierResponse& response, const PulseSpec& pulse) {
  const double omega0 = pulse.omega0();
  const double sigma = pulse.sigma_omega();
  std::vector<double> x, y;
  for (std::size_t k = 0; k < response.grid.size(); ++k) {
    if (std::abs(response.grid[k] - omega0) <= sigma) {
      x.push_back(response.grid[k]);
      y.push_back(response.phase[k]);
    }
  }
  if (x.size() < 3)
    throw std::domain_error("group_delay: fewer than 3 samples within one sigma "
                            "of the pulse centre");
  return detail::fit_line(x, y).slope;
}

/// Analytic signal on the barrier path, outside the stack. For x beyond the
/// exit plane this is the tau-filtered pulse; before the entrance plane it is
/// the incident pulse plus the rho-filtered counter-propagating one. The
/// reflected term carries the round-trip phase to the entrance plane, so its
/// packet timing is causal. split_position_nm is the x0 where both channels
/// originate.
inline std::complex<double> barrier_field(const Stack& stack, const PulseSpec& pulse,
                                          const FrequencyGrid& grid,
                                          double split_position_nm, double x_nm,
                                          double t_fs) {
  const double x1 = stack.entrance_position_nm;
  const double x2 = stack.exit_position_nm();
  if (x_nm >= x1 && x_nm <= x2)
    throw std::domain_error("barrier_field: interior fields are not modelled");

  const BarrierResponse response = stack_response(stack, grid);
  const double c = speed_of_light_nm_per_fs;
  const double t_rel = t_fs - pulse.emission_time_fs;
  const std::size_t n = grid.size();

  if (x_nm > x2) {
    std::vector<std::complex<double>> coeffs(n);
    for (std::size_t k = 0; k < n; ++k)
      coeffs[k] = gaussian_spectrum(pulse, grid[k]) * response.tau[k];
    return detail::spectral_sum(grid.front(), grid.spacing(), coeffs,
                                t_rel - (x_nm - split_position_nm) / c);
  }

  std::vector<std::complex<double>> incident(n), reflected(n);
  const double round_trip_fs = 2.0 * (x1 - split_position_nm) / c;
  for (std::size_t k = 0; k < n; ++k) {
    const double f = gaussian_spectrum(pulse, grid[k]);
    incident[k] = f;
    reflected[k] = f * response.rho[k] * std::polar(1.0, grid[k] * round_trip_fs);
  }
  const double delay = (x_nm - split_position_nm) / c;
  return detail::spectral_sum(grid.front(), grid.spacing(), incident, t_rel - delay) +
         detail::spectral_sum(grid.front(), grid.spacing(), reflected, t_rel + delay);
}

}  // namespace evanesim
