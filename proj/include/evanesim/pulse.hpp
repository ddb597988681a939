#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "evanesim/numerics.hpp"
#include "evanesim/units.hpp"

namespace evanesim {

/// Quasi-monochromatic Gaussian pulse, described by its cyclic centre
/// frequency and FWHM bandwidth (both in THz) and the emission time t0 at
/// which the field peaks at the split point.
struct PulseSpec {
  double center_frequency_thz;
  double fwhm_bandwidth_thz;
  double emission_time_fs;

  PulseSpec(double center_thz, double fwhm_thz, double emission_fs = 0.0)
      : center_frequency_thz(center_thz),
        fwhm_bandwidth_thz(fwhm_thz),
        emission_time_fs(emission_fs) {
    if (!(center_frequency_thz > 0.0))
      throw std::domain_error("PulseSpec: center_frequency must be positive");
    if (!(fwhm_bandwidth_thz > 0.0))
      throw std::domain_error("PulseSpec: fwhm_bandwidth must be positive");
    if (!(fwhm_bandwidth_thz < center_frequency_thz / 3.0))
      throw std::domain_error(
          "PulseSpec: quasi_monochromatic: fwhm_bandwidth must be below "
          "center_frequency / 3");
  }

  double omega0() const { return angular_from_thz(center_frequency_thz); }

  /// Standard deviation of the spectral amplitude, rad/fs.
  double sigma_omega() const {
    return angular_from_thz(fwhm_bandwidth_thz) / fwhm_per_sigma;
  }

  /// Temporal standard deviation of the analytic-signal envelope, fs.
  double sigma_time() const { return 1.0 / sigma_omega(); }
};

/// Uniform, strictly increasing grid of positive angular frequencies.
class FrequencyGrid {
 public:
  FrequencyGrid(double omega_min, double omega_max, std::size_t points) {
    if (points < 2) throw std::domain_error("FrequencyGrid: need at least 2 points");
    if (!(omega_min > 0.0))
      throw std::domain_error("FrequencyGrid: frequencies must stay positive");
    if (!(omega_max > omega_min))
      throw std::domain_error("FrequencyGrid: omega_max must exceed omega_min");
    spacing_ = (omega_max - omega_min) / static_cast<double>(points - 1);
    samples_.resize(points);
    for (std::size_t k = 0; k < points; ++k)
      samples_[k] = omega_min + static_cast<double>(k) * spacing_;
  }

  const std::vector<double>& samples() const { return samples_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t k) const { return samples_[k]; }
  double front() const { return samples_.front(); }
  double back() const { return samples_.back(); }

  /// Middle sample; odd point counts put the construction centre here.
  std::size_t center_index() const { return (samples_.size() - 1) / 2; }

  friend bool operator==(const FrequencyGrid& a, const FrequencyGrid& b) {
    return a.samples_.size() == b.samples_.size() &&
           a.samples_.front() == b.samples_.front() && a.spacing_ == b.spacing_;
  }

 private:
  std::vector<double> samples_;
  double spacing_ = 0.0;
};

/// Gaussian spectral amplitude, normalised to 1 at the centre frequency.
inline double gaussian_spectrum(const PulseSpec& pulse, double omega) {
  if (!(omega > 0.0))
    throw std::domain_error("gaussian_spectrum: omega must be positive");
  const double d = omega - pulse.omega0();
  const double s = pulse.sigma_omega();
  return std::exp(-d * d / (2.0 * s * s));
}

/// Grid centred on omega0 spanning +/- half_width_sigmas * sigma. An odd
/// point count places omega0 exactly on a sample.
inline FrequencyGrid make_frequency_grid(const PulseSpec& pulse,
                                         double half_width_sigmas,
                                         std::size_t points) {
  if (points < 2)
    throw std::domain_error("make_frequency_grid: need at least 2 points");
  if (!(half_width_sigmas > 0.0))
    throw std::domain_error("make_frequency_grid: half width must be positive");
  const double half = half_width_sigmas * pulse.sigma_omega();
  const double lo = pulse.omega0() - half;
  if (!(lo > 0.0))
    throw std::domain_error(
        "make_frequency_grid: grid would cross omega = 0; bandwidth too large "
        "for the quasi-monochromatic assumption");
  return FrequencyGrid(lo, pulse.omega0() + half, points);
}

/// Analytic signal of the freely propagating pulse,
///   integral f(w - w0) exp(-i w (t - t0 - position_delay)) dw,
/// by trapezoid quadrature on the given grid. position_delay is (x - x0)/c
/// in fs. The physical field is the real part.
inline std::complex<double> free_analytic_signal(const PulseSpec& pulse,
                                                 const FrequencyGrid& grid,
                                                 double position_delay_fs,
                                                 double t_fs) {
  std::vector<std::complex<double>> coeffs(grid.size());
  for (std::size_t k = 0; k < grid.size(); ++k)
    coeffs[k] = gaussian_spectrum(pulse, grid[k]);
  const double dt = (t_fs - pulse.emission_time_fs) - position_delay_fs;
  return detail::spectral_sum(grid.front(), grid.spacing(), coeffs, dt);
}

}  // namespace evanesim
