#ifndef RYDSIM_UNITS_HPP
#define RYDSIM_UNITS_HPP

#include <numbers>

// Internal unit system: angular frequencies in rad/us, lengths in um,
// times in us. Config files quote ordinary frequencies nu in MHz; the
// conversion is omega = 2*pi*nu, so "2pi x 1 MHz" == 2*pi rad/us.

namespace rydsim {

inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Ordinary frequency in MHz -> angular frequency in rad/us.
constexpr double mhz_to_angular(double nu_mhz) { return two_pi * nu_mhz; }

/// Angular frequency in rad/us -> ordinary frequency in MHz.
constexpr double angular_to_mhz(double omega) { return omega / two_pi; }

/// Angular frequency in rad/us -> ordinary frequency in kHz.
constexpr double angular_to_khz(double omega) { return 1e3 * omega / two_pi; }

} // namespace rydsim

#endif // RYDSIM_UNITS_HPP
