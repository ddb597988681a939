#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "evanesim/errors.hpp"
#include "evanesim/layered.hpp"
#include "evanesim/numerics.hpp"
#include "evanesim/pulse.hpp"
#include "evanesim/units.hpp"

namespace evanesim {

/// Uniform, strictly increasing grid of sample times.
class TimeGrid {
 public:
  TimeGrid(double start_fs, double step_fs, std::size_t count) {
    if (count < 2) throw std::domain_error("TimeGrid: need at least 2 samples");
    if (!(step_fs > 0.0)) throw std::domain_error("TimeGrid: step must be positive");
    spacing_ = step_fs;
    samples_.resize(count);
    for (std::size_t j = 0; j < count; ++j)
      samples_[j] = start_fs + static_cast<double>(j) * step_fs;
  }

  /// Grid spanning center +/- half_span, with the centre on a sample.
  static TimeGrid centered(double center_fs, double half_span_fs, double step_fs) {
    if (!(half_span_fs > 0.0) || !(step_fs > 0.0))
      throw std::domain_error("TimeGrid: span and step must be positive");
    const auto half_count = static_cast<std::size_t>(std::ceil(half_span_fs / step_fs - 1e-9));
    return TimeGrid(center_fs - static_cast<double>(half_count) * step_fs, step_fs,
                    2 * half_count + 1);
  }

  const std::vector<double>& samples() const { return samples_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t j) const { return samples_[j]; }
  double front() const { return samples_.front(); }
  double back() const { return samples_.back(); }

  friend bool operator==(const TimeGrid& a, const TimeGrid& b) {
    return a.samples_.size() == b.samples_.size() &&
           a.samples_.front() == b.samples_.front() && a.spacing_ == b.spacing_;
  }

 private:
  std::vector<double> samples_;
  double spacing_ = 0.0;
};

enum class CurveLabel { reference, barrier, difference, shg };

/// Sampled probability-per-alpha curve (or normalised coincidence curve).
/// underflow_warning marks curves whose integrand underflowed everywhere.
struct DetectionCurve {
  TimeGrid grid;
  std::vector<double> values;
  CurveLabel label;
  bool underflow_warning = false;
};

namespace detail {

inline std::vector<std::complex<double>> detector_coefficients(
    const PulseSpec& pulse, const FrequencyGrid& grid,
    const BarrierResponse* response) {
  if (response && !(response->grid == grid))
    throw std::invalid_argument(
        "detection: response was sampled on a different frequency grid");
  std::vector<std::complex<double>> coeffs(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    coeffs[k] = gaussian_spectrum(pulse, grid[k]);
    if (response) coeffs[k] *= response->tau[k];
  }
  return coeffs;
}

// Aliasing guard on the frequency discretisation: the quadrature envelope is
// trusted only while spacing * |t - T| stays well below the alias period.
inline void check_nyquist(const FrequencyGrid& grid, const TimeGrid& times,
                          double retardation_fs) {
  const double reach = std::max(std::abs(times.front() - retardation_fs),
                                std::abs(times.back() - retardation_fs));
  if (!(grid.spacing() * reach < pi / 4.0))
    throw numeric_error(
        "detection: frequency spacing too coarse for the requested time span "
        "(spacing * |t - T| must stay below pi/4)");
}

inline DetectionCurve cumulative_probability(const PulseSpec& pulse,
                                             const FrequencyGrid& grid,
                                             const BarrierResponse* response,
                                             double retardation_fs,
                                             const TimeGrid& time_grid,
                                             CurveLabel label) {
  // The integral in t' starts at 0. A window that opens later is accepted
  // only when the omitted head is provably negligible (envelope centre at
  // least 10 sigma past the window start).
  const bool starts_at_zero = time_grid.front() == 0.0;
  const bool head_negligible =
      time_grid.front() + 10.0 * pulse.sigma_time() <= retardation_fs;
  if (!starts_at_zero && !head_negligible)
    throw std::invalid_argument(
        "detection: time grid must start at 0 or early enough that the "
        "omitted head of the integral is negligible");
  check_nyquist(grid, time_grid, retardation_fs);

  const auto coeffs = detector_coefficients(pulse, grid, response);

  // Independent per-sample envelope evaluations (parallel map), then a
  // sequential prefix sum for the cumulative integral.
  std::vector<double> intensity(time_grid.size());
  for (std::size_t j = 0; j < time_grid.size(); ++j)
    intensity[j] = std::norm(spectral_sum(grid.front(), grid.spacing(), coeffs,
                                          time_grid[j] - retardation_fs));

  DetectionCurve curve{time_grid, cumulative_trapezoid(intensity, time_grid.spacing()),
                       label};
  if (curve.values.back() < 1e-300) {
    std::fill(curve.values.begin(), curve.values.end(), 0.0);
    curve.underflow_warning = true;
  }
  return curve;
}

}  // namespace detail

/// Inner frequency integral of the detection probability at one time:
/// the tau-filtered analytic signal at the detector, or the free one when
/// response is null.
inline std::complex<double> detector_envelope(const PulseSpec& pulse,
                                              const FrequencyGrid& grid,
                                              const BarrierResponse* response,
                                              double retardation_fs, double t_fs) {
  const auto coeffs = detail::detector_coefficients(pulse, grid, response);
  return detail::spectral_sum(grid.front(), grid.spacing(), coeffs,
                              t_fs - retardation_fs);
}

/// P_r(t)/alpha: cumulative time integral of the squared free envelope at the
/// detector, non-decreasing in t.
inline DetectionCurve reference_probability(const PulseSpec& pulse,
                                            const FrequencyGrid& grid,
                                            double retardation_fs,
                                            const TimeGrid& time_grid) {
  return detail::cumulative_probability(pulse, grid, nullptr, retardation_fs,
                                        time_grid, CurveLabel::reference);
}

/// P_b(t)/alpha: as reference_probability with the tau-filtered envelope.
inline DetectionCurve barrier_probability(const PulseSpec& pulse,
                                          const FrequencyGrid& grid,
                                          const BarrierResponse& response,
                                          double retardation_fs,
                                          const TimeGrid& time_grid) {
  return detail::cumulative_probability(pulse, grid, &response, retardation_fs,
                                        time_grid, CurveLabel::barrier);
}

/// Pointwise P_r - P_b on a shared time grid. Positivity is a property under
/// test elsewhere, not asserted here.
inline DetectionCurve probability_difference(const DetectionCurve& reference,
                                             const DetectionCurve& barrier) {
  if (!(reference.grid == barrier.grid))
    throw std::invalid_argument("probability_difference: time grids differ");
  DetectionCurve out{reference.grid, std::vector<double>(reference.values.size()),
                     CurveLabel::difference,
                     reference.underflow_warning || barrier.underflow_warning};
  for (std::size_t j = 0; j < out.values.size(); ++j)
    out.values[j] = reference.values[j] - barrier.values[j];
  return out;
}

struct ShgOptions {
  double window_half_width_fs = 0.0;  // 0 = size automatically from the pulse
  double max_edge_intensity_ratio = 1e-8;
};

struct ShgResult {
  DetectionCurve curve;
  double window_lo_fs = 0.0;  // integration window, relative to T
  double window_hi_fs = 0.0;
  double edge_ratio_reference = 0.0;
  double edge_ratio_barrier = 0.0;
  double peak_delay_fs = 0.0;
};

/// Coincidence signal of the two channels versus relative delay t:
///   integral |E_r(x_l, t' + t)|^2 |E_b(x_l, t')|^2 dt',
/// normalised to its own maximum. Positive delay advances the reference
/// pulse. The infinite integration window is realised as a finite one with an
/// explicit tail check at its edges. A null response means both channels see
/// the free pulse.
inline ShgResult shg_coincidence_detailed(const PulseSpec& pulse,
                                          const FrequencyGrid& grid,
                                          const BarrierResponse* response,
                                          double retardation_fs,
                                          const TimeGrid& delay_grid,
                                          const ShgOptions& options = {}) {
  const double sigma_t = pulse.sigma_time();
  const double delay_step = delay_grid.spacing();

  // Sub-sample the delay step so the t' quadrature resolves the envelope
  // while every delay stays an exact index offset.
  const auto refine = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::ceil(delay_step / 0.25 - 1e-9)));
  const double h = delay_step / static_cast<double>(refine);

  double barrier_center = 0.0;
  if (response) barrier_center = group_delay(*response, pulse);

  double lo, hi;
  if (options.window_half_width_fs > 0.0) {
    lo = -options.window_half_width_fs;
    hi = options.window_half_width_fs;
  } else {
    lo = std::min(0.0, barrier_center) - 12.0 * sigma_t;
    hi = std::max(0.0, barrier_center) + 12.0 * sigma_t;
  }

  const auto base_count =
      static_cast<std::size_t>(std::llround(std::ceil((hi - lo) / h))) + 1;
  const std::size_t ext_count = base_count + (delay_grid.size() - 1) * refine;

  const auto coeffs_ref = detail::detector_coefficients(pulse, grid, nullptr);
  const auto coeffs_bar = detail::detector_coefficients(pulse, grid, response);

  const TimeGrid barrier_times(retardation_fs + lo, h, base_count);
  const TimeGrid reference_times(retardation_fs + lo + delay_grid.front(), h, ext_count);
  detail::check_nyquist(grid, barrier_times, retardation_fs);
  detail::check_nyquist(grid, reference_times, retardation_fs);

  std::vector<double> intensity_bar(base_count), intensity_ref(ext_count);
  for (std::size_t j = 0; j < base_count; ++j)
    intensity_bar[j] = std::norm(detail::spectral_sum(
        grid.front(), grid.spacing(), coeffs_bar, barrier_times[j] - retardation_fs));
  for (std::size_t j = 0; j < ext_count; ++j)
    intensity_ref[j] = std::norm(detail::spectral_sum(
        grid.front(), grid.spacing(), coeffs_ref, reference_times[j] - retardation_fs));

  const double peak_bar = *std::max_element(intensity_bar.begin(), intensity_bar.end());
  const double peak_ref = *std::max_element(intensity_ref.begin(), intensity_ref.end());

  ShgResult result{DetectionCurve{delay_grid, std::vector<double>(delay_grid.size(), 0.0),
                                  CurveLabel::shg},
                   lo, hi, 0.0, 0.0, 0.0};

  if (peak_bar < 1e-300 || peak_ref < 1e-300) {
    result.curve.underflow_warning = true;
    return result;
  }

  result.edge_ratio_barrier =
      std::max(intensity_bar.front(), intensity_bar.back()) / peak_bar;
  result.edge_ratio_reference =
      std::max(intensity_ref.front(), intensity_ref.back()) / peak_ref;
  if (result.edge_ratio_barrier > options.max_edge_intensity_ratio ||
      result.edge_ratio_reference > options.max_edge_intensity_ratio)
    throw numeric_error(
        "shg_coincidence: integration window too small, envelope tails exceed " +
        std::to_string(options.max_edge_intensity_ratio) + " of peak at its edges");

  for (std::size_t j = 0; j < delay_grid.size(); ++j) {
    const std::size_t offset = j * refine;
    double acc = 0.5 * (intensity_ref[offset] * intensity_bar[0] +
                        intensity_ref[offset + base_count - 1] *
                            intensity_bar[base_count - 1]);
    for (std::size_t k = 1; k + 1 < base_count; ++k)
      acc += intensity_ref[offset + k] * intensity_bar[k];
    result.curve.values[j] = acc * h;
  }

  const auto peak_it =
      std::max_element(result.curve.values.begin(), result.curve.values.end());
  const double peak = *peak_it;
  if (peak < 1e-300) {
    std::fill(result.curve.values.begin(), result.curve.values.end(), 0.0);
    result.curve.underflow_warning = true;
    return result;
  }
  for (double& value : result.curve.values) value /= peak;

  // Parabolic refinement of the peak position.
  const auto i = static_cast<std::size_t>(peak_it - result.curve.values.begin());
  result.peak_delay_fs = delay_grid[i];
  if (i > 0 && i + 1 < result.curve.values.size()) {
    const double ym = result.curve.values[i - 1];
    const double yp = result.curve.values[i + 1];
    const double denom = ym - 2.0 * result.curve.values[i] + yp;
    if (denom < 0.0)
      result.peak_delay_fs += 0.5 * (ym - yp) / denom * delay_grid.spacing();
  }
  return result;
}

inline DetectionCurve shg_coincidence(const PulseSpec& pulse, const FrequencyGrid& grid,
                                      const BarrierResponse* response,
                                      double retardation_fs, const TimeGrid& delay_grid,
                                      const ShgOptions& options = {}) {
  return shg_coincidence_detailed(pulse, grid, response, retardation_fs, delay_grid,
                                  options)
      .curve;
}

}  // namespace evanesim
