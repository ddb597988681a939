#pragma once

// Unit conventions used throughout: time in femtoseconds, angular frequency
// in rad/fs, layer thicknesses in nanometres, path lengths in millimetres.
// All exponents stay O(1) that way; the speed of light enters only when a
// path length is converted to a retardation time.

namespace evanesim {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double speed_of_light_nm_per_fs = 299.792458;
inline constexpr double speed_of_light_mm_per_fs = 299.792458e-6;

// 1 THz = 1e-3 cycles/fs
inline constexpr double rad_per_fs_per_thz = two_pi * 1e-3;

inline constexpr double thz_from_angular(double omega_rad_fs) {
  return omega_rad_fs / rad_per_fs_per_thz;
}

inline constexpr double angular_from_thz(double nu_thz) {
  return nu_thz * rad_per_fs_per_thz;
}

// FWHM of a Gaussian = 2*sqrt(2 ln 2) * sigma
inline constexpr double fwhm_per_sigma = 2.3548200450309493;

}  // namespace evanesim
