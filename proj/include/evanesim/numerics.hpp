#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace evanesim::detail {

/// Trapezoid-weighted spectral sum over a uniform frequency grid:
///
///   spacing * sum_k w_k * coeffs[k] * exp(-i * (omega_front + k*spacing) * dt)
///
/// with w = 1/2 at the ends. The complex exponentials are generated by a
/// phase-rotor recurrence, so the cost is one std::polar call plus one
/// complex multiply per sample. The recurrence drift is O(n*eps), far below
/// the truncation error of the frequency window itself.
inline std::complex<double> spectral_sum(double omega_front, double spacing,
                                         std::span<const std::complex<double>> coeffs,
                                         double dt) {
  const std::size_t n = coeffs.size();
  if (n < 2) throw std::invalid_argument("spectral_sum: need at least 2 samples");
  const std::complex<double> step = std::polar(1.0, -spacing * dt);
  std::complex<double> rotor = std::polar(1.0, -omega_front * dt);
  std::complex<double> acc = 0.5 * coeffs[0] * rotor;
  for (std::size_t k = 1; k + 1 < n; ++k) {
    rotor *= step;
    acc += coeffs[k] * rotor;
  }
  rotor *= step;
  acc += 0.5 * coeffs[n - 1] * rotor;
  return spacing * acc;
}

/// Cumulative trapezoid integral on a uniform grid; out[0] = 0.
/// Non-negative inputs give a non-decreasing output, also in floating point.
inline std::vector<double> cumulative_trapezoid(std::span<const double> values,
                                                double spacing) {
  std::vector<double> out(values.size(), 0.0);
  for (std::size_t j = 1; j < values.size(); ++j)
    out[j] = out[j - 1] + 0.5 * (values[j - 1] + values[j]) * spacing;
  return out;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};

/// Least-squares straight line through (x[i], y[i]); x is centred first so
/// the normal equations stay well conditioned on narrow windows.
inline LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("fit_line: need two or more paired samples");
  const std::size_t n = x.size();
  double x_mean = 0.0, y_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    x_mean += x[i];
    y_mean += y[i];
  }
  x_mean /= static_cast<double>(n);
  y_mean /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - x_mean;
    sxx += dx * dx;
    sxy += dx * (y[i] - y_mean);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = y_mean - fit.slope * x_mean;
  return fit;
}

}  // namespace evanesim::detail
