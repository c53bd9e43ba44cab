#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "cfc/model.hpp"
#include "cfc/quasipoly.hpp"

namespace cfc {

/// Linear response at one frequency: the closed-loop mechanical
/// susceptibility and the full map t from the nine inputs to Q(omega),
/// Q(w) = t(w) . xi(w). For real w the mirrored row obeys t(-w) = conj(t(w)).
struct TransferRow {
  double omega = 0.0;
  Cx chi_cf;      // (Q,P) entry of -(A + i w I)^{-1}, units 1/(rad/s)
  Vec9c t_vector; // full input-to-Q map
};

namespace detail {

/// LU factorization with a cheap singularity guard on the U diagonal.
inline Eigen::PartialPivLU<Mat6c> guarded_lu(const Mat6c& m, double omega) {
  Eigen::PartialPivLU<Mat6c> lu(m);
  const auto diag = lu.matrixLU().diagonal();
  double dmin = std::abs(diag(0)), dmax = dmin;
  for (int i = 1; i < 6; ++i) {
    const double d = std::abs(diag(i));
    dmin = std::min(dmin, d);
    dmax = std::max(dmax, d);
  }
  if (!(dmin > dmax * 1e-15)) throw SingularAt(omega);
  return lu;
}

inline Mat6c system_matrix(const SteadyState& ss, const SystemParams& p,
                           double omega) {
  Mat6c m = drift_matrix(ss, p, omega).entries;
  for (int i = 0; i < 6; ++i) m(i, i) += Cx(0.0, omega);
  return m;
}

} // namespace detail

/// Full state response: rows of -(A + i w I)^{-1} B, one per state
/// component, columns per input channel.
inline Mat69c solve_full_transfer(const SteadyState& ss, const SystemParams& p,
                                  double omega) {
  const auto lu =
      detail::guarded_lu(detail::system_matrix(ss, p, omega), omega);
  const Mat69c b = input_matrix(ss, p, omega);
  return -lu.solve(b);
}

inline TransferRow solve_transfer(const SteadyState& ss, const SystemParams& p,
                                  double omega) {
  // Only the Q row of -(A + i w I)^{-1} is needed: one adjoint solve.
  const Mat6c m = detail::system_matrix(ss, p, omega);
  const auto lu = detail::guarded_lu(Mat6c(m.transpose()), omega);
  Vec6c e0 = Vec6c::Zero();
  e0(0) = -1.0;
  const Vec6c row = lu.solve(e0);
  TransferRow tr;
  tr.omega = omega;
  tr.chi_cf = row(1);
  tr.t_vector = (row.transpose() * input_matrix(ss, p, omega)).transpose();
  if (!tr.t_vector.allFinite()) throw SingularAt(omega);
  return tr;
}

/// Closed-form susceptibility from the quasi-polynomial route,
///   chi(w) = d_h(w) d_v(w) / (f(w) * omega_m),
/// with d = (kappa/2 - i w)^2 + delta_eff^2 in mechanical-frequency units.
/// Matches the dense solve wherever both are defined; also used for fast
/// pole finding.
inline Cx chi_cf_closed_form(const QuasiPolynomial& qp, double omega) {
  const Cx w = Cx(omega / qp.omega_scale, 0.0);
  const Cx s = Cx(qp.kappa_norm / 2.0, 0.0) - Cx(0.0, 1.0) * w;
  const Cx d_h = s * s + qp.dh_norm * qp.dh_norm;
  const Cx d_v = s * s + qp.dv_norm * qp.dv_norm;
  return d_h * d_v / (qp.eval_normalized(w) * qp.omega_scale);
}

/// Two-sided PSD of the mechanical position at omega,
///   S_QQ(w) = sum_jk t_j(w) M_jk t_k(-w),
/// evaluated through t(-w) = conj(t(w)) for real w. Real and non-negative up
/// to roundoff because M_xi is Hermitian positive semidefinite.
inline double s_qq(const SteadyState& ss, const SystemParams& p,
                   const NoiseModel& noise, double omega) {
  const TransferRow tr = solve_transfer(ss, p, omega);
  const Cx val = tr.t_vector.transpose() * noise.m_xi * tr.t_vector.conjugate();
  return std::real(val);
}

/// Detected homodyne PSD of the probe phase quadrature, normalized so the
/// shot-noise limit sits at 0.5. The output rotation angle comes from the
/// mean reflected field; detection loss mixes in (1 - eta_det)/2 of vacuum.
inline double detected_psd(const SteadyState& ss, const SystemParams& p,
                           const NoiseModel& noise, double omega) {
  const Cx mean_out =
      std::exp(Cx(0.0, -ss.u)) *
      (std::sqrt(p.kappa_in) * ss.mean_h - Cx(ss.mean_h_in, 0.0));
  if (std::abs(mean_out) == 0.0)
    throw UndefinedHomodynePhase(
        "mean output field vanishes; homodyne phase undefined");
  const double phase_out = -std::arg(mean_out);

  const Mat69c gb = solve_full_transfer(ss, p, omega);
  Vec9c w_y = (std::sqrt(p.kappa_in) * gb.row(3)).transpose();
  w_y(2) -= 1.0; // -Y_h^in direct reflection
  Vec9c w_x = (std::sqrt(p.kappa_in) * gb.row(2)).transpose();
  w_x(1) -= 1.0; // -X_h^in
  const Vec9c w_out =
      std::cos(phase_out) * w_y - std::sin(phase_out) * w_x;
  const Cx s_out = w_out.transpose() * noise.m_xi * w_out.conjugate();
  return p.eta_det * std::real(s_out) + 0.5 * (1.0 - p.eta_det);
}

} // namespace cfc
