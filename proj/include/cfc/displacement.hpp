#pragma once

#include <cmath>
#include <complex>

#include "cfc/errors.hpp"
#include "cfc/params.hpp"

namespace cfc {

/// Complex drive added to the re-injected field by the displacement stage.
/// delta0 is the raw beamsplitter output, delta includes the post-stage loss.
struct DisplacementAmplitude {
  std::complex<double> delta0; // sqrt(1-T) |beta_LO| e^{i(-theta+psi)}
  std::complex<double> delta;  // sqrt(eta_f) * delta0
};

inline DisplacementAmplitude displacement_amplitude(
    const DisplacementSetup& setup, double eta_f) {
  const double mag =
      std::sqrt(1.0 - setup.bs_transmissivity) * setup.lo_amplitude;
  const std::complex<double> d0 =
      mag * std::exp(std::complex<double>(0.0, -setup.theta + setup.psi));
  return {d0, std::sqrt(eta_f) * d0};
}

/// Closed-form displacement angle x = Arg(g_v) for the phi = 0, psi = 0
/// convention. The general case is obtained from the steady state directly;
/// this form exists as an independently checkable special case. Note the
/// signal term enters through 1 - kappa_in/(kappa/2 - i delta_h_eff), whose
/// imaginary part is -kappa_in*delta_h_eff/((kappa/2)^2 + delta_h_eff^2).
inline double angle_x(const DisplacementSetup& setup,
                      const SystemParams& params, double delta_h_eff,
                      double delta_v_eff, double mean_h_in) {
  if (params.phi != 0.0 || setup.psi != 0.0)
    throw ValidationError("angle_x closed form requires phi = 0 and psi = 0");
  const double half_kappa = params.kappa / 2.0;
  const double denom = half_kappa * half_kappa + delta_h_eff * delta_h_eff;
  const double lo = std::sqrt(params.eta_f * (1.0 - setup.bs_transmissivity)) *
                    setup.lo_amplitude;
  const double sqrt_eta = std::sqrt(params.eta_loop);
  const double sin_group =
      lo * std::sin(-setup.theta) -
      sqrt_eta * (params.kappa_in * delta_h_eff / denom) * mean_h_in;
  const double cos_group =
      lo * std::cos(-setup.theta) +
      sqrt_eta * (1.0 - params.kappa_in * half_kappa / denom) * mean_h_in;
  const double num = half_kappa * sin_group + delta_v_eff * cos_group;
  const double den = half_kappa * cos_group - delta_v_eff * sin_group;
  if (num == 0.0 && den == 0.0)
    throw DegenerateArgument(
        "angle_x: no drive on the v mode (both LO and probe vanish)");
  return std::atan2(num, den);
}

/// Total displacement angle gamma = phi - u + x, wrapped to (-pi, pi].
inline double compose_gamma(double phi, double u, double x) {
  return wrap_angle(phi - u + x);
}

} // namespace cfc
