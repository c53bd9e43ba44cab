#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "cfc/params.hpp"
#include "cfc/steady_state.hpp"

namespace cfc {

using Mat6c = Eigen::Matrix<Cx, 6, 6>;
using Mat69c = Eigen::Matrix<Cx, 6, 9>;
using Mat9c = Eigen::Matrix<Cx, 9, 9>;
using Vec6c = Eigen::Matrix<Cx, 6, 1>;
using Vec9c = Eigen::Matrix<Cx, 9, 1>;

// State ordering: (Q, P, X_h, Y_h, X_v, Y_v).
// Input ordering:  (P_in, X_h^in, Y_h^in, X_h^loss, Y_h^loss,
//                   X_v^loss, Y_v^loss, dDelta_h, dDelta_v).

/// Frequency-domain drift matrix A(omega) of the linearized quadrature
/// dynamics, -i w X = A X + b. Rows 1-4 carry no omega dependence; only the
/// v-mode rows see the delay factor e^{i w tau} through the feedback loop.
struct DriftMatrix {
  Mat6c entries;
  double omega = 0.0;
};

inline DriftMatrix drift_matrix(const SteadyState& ss, const SystemParams& p,
                                double omega) {
  if (!std::isfinite(omega))
    throw ValidationError("drift_matrix: omega must be finite");
  const double gh = std::abs(ss.g_h);
  const double gv = std::abs(ss.g_v);
  const double half_kappa = p.kappa / 2.0;
  const double g = ss.gamma_angle;
  const Cx fb = std::sqrt(p.eta_loop) * p.kappa_in *
                std::exp(Cx(0.0, omega * p.tau));

  Mat6c a = Mat6c::Zero();
  a(0, 1) = p.omega_m;
  a(1, 0) = -p.omega_m;
  a(1, 1) = -p.gamma_m;
  a(1, 2) = -2.0 * gh;
  a(1, 4) = -2.0 * gv;
  a(2, 2) = -half_kappa;
  a(2, 3) = -ss.delta_h_eff;
  a(3, 0) = -2.0 * gh;
  a(3, 2) = ss.delta_h_eff;
  a(3, 3) = -half_kappa;
  a(4, 2) = -fb * std::cos(g);
  a(4, 3) = -fb * std::sin(g);
  a(4, 4) = -half_kappa;
  a(4, 5) = -ss.delta_v_eff;
  a(5, 0) = -2.0 * gv;
  a(5, 2) = fb * std::sin(g);
  a(5, 3) = -fb * std::cos(g);
  a(5, 4) = ss.delta_v_eff;
  a(5, 5) = -half_kappa;
  return {a, omega};
}

/// Input coupling matrix B(omega) with b(omega) = B(omega) * xi(omega).
/// The probe vacuum enters the v rows a second time through the delayed,
/// gamma-rotated feedback path.
inline Mat69c input_matrix(const SteadyState& ss, const SystemParams& p,
                           double omega) {
  const double g = ss.gamma_angle;
  const double sqrt_kin = std::sqrt(p.kappa_in);
  const double sqrt_loss_h = std::sqrt(p.kappa - p.kappa_in);
  const double sqrt_loss_v = std::sqrt(p.kappa - p.eta_loop * p.kappa_in);
  const Cx fb_in = std::sqrt(p.eta_loop * p.kappa_in) *
                   std::exp(Cx(0.0, omega * p.tau));

  Mat69c b = Mat69c::Zero();
  b(1, 0) = std::sqrt(2.0 * p.gamma_m);
  b(2, 1) = sqrt_kin;
  b(2, 3) = sqrt_loss_h;
  b(3, 2) = sqrt_kin;
  b(3, 4) = sqrt_loss_h;
  b(3, 7) = -std::sqrt(2.0) * std::abs(ss.mean_h);
  b(4, 5) = sqrt_loss_v;
  b(4, 1) = fb_in * std::cos(g);
  b(4, 2) = fb_in * std::sin(g);
  b(5, 6) = sqrt_loss_v;
  b(5, 1) = -fb_in * std::sin(g);
  b(5, 2) = fb_in * std::cos(g);
  b(5, 8) = -std::sqrt(2.0) * std::abs(ss.mean_v);
  return b;
}

/// Correlation matrix M_xi of the nine input channels, defined through
/// <xi(w) xi^T(w')> = M_xi * 2*pi*delta(w + w'). The delta factor is handled
/// analytically by the spectra routines and never discretized.
struct NoiseModel {
  Mat9c m_xi;
  double n_bar_in = 0.0;
};

inline NoiseModel noise_model(const SystemParams& p, double n_bar_in) {
  if (!(n_bar_in >= 0.0))
    throw ValidationError("noise_model: n_bar_in must be >= 0");
  Mat9c m = Mat9c::Zero();
  m(0, 0) = n_bar_in + 0.5;
  for (int i : {1, 3, 5}) {
    m(i, i) = 0.5;
    m(i + 1, i + 1) = 0.5;
    m(i, i + 1) = Cx(0.0, 0.5);
    m(i + 1, i) = Cx(0.0, -0.5);
  }
  m(7, 7) = p.s_dd_h;
  m(8, 8) = p.s_dd_v;
  return {m, n_bar_in};
}

inline NoiseModel noise_model(const SystemParams& p) {
  return noise_model(p, thermal_occupation(p.bath_temperature, p.omega_m));
}

} // namespace cfc
