#pragma once

#include <cmath>
#include <string>

#include "cfc/constants.hpp"
#include "cfc/errors.hpp"

namespace cfc {

/// Beamsplitter stage that adds a strong auxiliary field to the reflected
/// signal before re-injection. theta is the lockable interference angle
/// between the two beams; psi is a fixed construction phase offset.
struct DisplacementSetup {
  double bs_transmissivity = 0.9; // T, signal-path transmissivity, in (0,1]
  double lo_amplitude = 0.0;      // |beta_LO|, sqrt(photons/s) at the beamsplitter
  double theta = 0.0;             // rad
  double psi = 0.0;               // rad
};

/// Physical and technical constants of the cavity-membrane-feedback system.
/// All frequencies and rates are angular (rad/s), powers in W, lengths in m.
/// Immutable by convention once validated; every solver takes it by const
/// reference.
struct SystemParams {
  double omega_m = 0.0;   // mechanical resonance
  double gamma_m = 0.0;   // mechanical damping, = omega_m / q_factor
  double q_factor = 0.0;  // mechanical quality factor
  double kappa = 0.0;     // total cavity linewidth
  double kappa_in = 0.0;  // input-coupler rate, <= kappa
  double delta_h = 0.0;   // bare detuning, horizontal mode
  double delta_v = 0.0;   // bare detuning, vertical mode
  double g0_h = 0.0;      // vacuum optomechanical coupling, h mode
  double g0_v = 0.0;      // vacuum optomechanical coupling, v mode
  double p_h_in = 0.0;    // probe power, W
  double p_v_aux = 0.0;   // cooling-beam power setting, W
  double eta_mm_h = 1.0;  // cavity mode matching of the probe
  double eta_mm_v = 1.0;  // cavity mode matching of the cooling beam
  double wavelength = 0.0;
  double eta_loop = 0.0;  // feedback-loop efficiency
  double eta_f = 1.0;     // losses after the displacement beamsplitter
  double eta_i = 1.0;     // losses between cavity and beamsplitter
  double eta_det = 0.0;   // total detection efficiency
  double eta_hom = 1.0;   // homodyne visibility factor (bookkeeping only)
  double tau = 0.0;       // feedback delay, s
  double phi = 0.0;       // feedback loop phase, rad
  double bath_temperature = 0.0; // K
  double s_dd_h = 0.0;    // white detuning-noise PSD, (rad/s)^2/Hz
  double s_dd_v = 0.0;
  DisplacementSetup displacement;

  /// Laser angular frequency fixed by the wavelength.
  double laser_omega() const { return two_pi * speed_of_light / wavelength; }

  /// Mean probe input amplitude <h_in> = sqrt(P eta_mm / (hbar omega_L));
  /// unmatched light does not couple to the cavity mode.
  double mean_h_in() const {
    return std::sqrt(p_h_in * eta_mm_h / (hbar * laser_omega()));
  }

  /// Mean cooling-beam amplitude at the cavity, sqrt(photons/s).
  double mean_v_in() const {
    return std::sqrt(p_v_aux * eta_mm_v / (hbar * laser_omega()));
  }

  void validate() const {
    auto in01 = [](double x) { return x >= 0.0 && x <= 1.0; };
    if (!(omega_m > 0.0)) throw ValidationError("omega_m must be > 0");
    if (!(kappa > 0.0)) throw ValidationError("kappa must be > 0");
    if (!(wavelength > 0.0)) throw ValidationError("wavelength must be > 0");
    if (!(kappa_in > 0.0) || kappa_in > kappa)
      throw ValidationError("kappa_in must lie in (0, kappa]");
    if (!(q_factor > 0.0)) throw ValidationError("q_factor must be > 0");
    if (std::abs(gamma_m - omega_m / q_factor) >
        1e-12 * std::abs(omega_m / q_factor))
      throw ValidationError("gamma_m inconsistent with omega_m / q_factor");
    if (!in01(eta_loop) || !in01(eta_f) || !in01(eta_i) || !in01(eta_det) ||
        !in01(eta_hom) || !in01(eta_mm_h) || !in01(eta_mm_v))
      throw ValidationError("all efficiencies must lie in [0, 1]");
    if (tau < 0.0) throw ValidationError("tau must be >= 0");
    if (p_h_in < 0.0 || p_v_aux < 0.0)
      throw ValidationError("powers must be >= 0");
    if (s_dd_h < 0.0 || s_dd_v < 0.0)
      throw ValidationError("noise PSD levels must be >= 0");
    if (bath_temperature < 0.0)
      throw ValidationError("bath temperature must be >= 0");
    if (g0_h < 0.0 || g0_v < 0.0)
      throw ValidationError("vacuum couplings must be >= 0");
    if (!(displacement.bs_transmissivity > 0.0) ||
        displacement.bs_transmissivity > 1.0)
      throw ValidationError("beamsplitter transmissivity must lie in (0, 1]");
    if (displacement.lo_amplitude < 0.0)
      throw ValidationError("LO amplitude must be >= 0");
    for (double x : {omega_m, gamma_m, kappa, kappa_in, delta_h, delta_v,
                     g0_h, g0_v, tau, phi, s_dd_h, s_dd_v})
      if (!std::isfinite(x)) throw ValidationError("non-finite parameter");
  }

  /// Sets gamma_m from omega_m and q.
  void set_q_factor(double q) {
    q_factor = q;
    gamma_m = omega_m / q;
  }
};

/// Wraps an angle to (-pi, pi].
inline double wrap_angle(double a) {
  a = std::fmod(a, two_pi);
  if (a <= -pi) a += two_pi;
  if (a > pi) a -= two_pi;
  return a;
}

} // namespace cfc
