#ifndef KERRCAT_UNITS_HPP
#define KERRCAT_UNITS_HPP

// Internal units: angular frequency in rad/us, time in us, temperature in K.
// Energies are quoted as E/h in MHz at the edges and converted here.

#include <numbers>

namespace kerrcat::units {

inline constexpr double two_pi = 2.0 * std::numbers::pi;
inline constexpr double hbar = 1.054571817e-34;  // J s
inline constexpr double k_B = 1.380649e-23;      // J/K

/// E/h in MHz -> rad/us.
constexpr double from_mhz(double f_mhz) { return two_pi * f_mhz; }
constexpr double from_ghz(double f_ghz) { return two_pi * 1e3 * f_ghz; }
constexpr double to_mhz(double omega) { return omega / two_pi; }

/// Plain rates quoted in Hz become 1/us without a 2*pi factor.
constexpr double rate_from_hz(double r_hz) { return r_hz * 1e-6; }

}  // namespace kerrcat::units

#endif  // KERRCAT_UNITS_HPP
