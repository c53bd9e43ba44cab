#pragma once

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "cfc/errors.hpp"
#include "cfc/params.hpp"
#include "cfc/steady_state.hpp"

namespace cfc {

namespace detail {

template <std::size_t N>
inline Cx horner(const std::array<Cx, N>& c, Cx w) {
  Cx acc = c[N - 1];
  for (std::size_t i = N - 1; i-- > 0;) acc = acc * w + c[i];
  return acc;
}

template <std::size_t N>
inline Cx horner_deriv(const std::array<Cx, N>& c, Cx w) {
  Cx acc = double(N - 1) * c[N - 1];
  for (std::size_t i = N - 1; i-- > 1;) acc = acc * w + double(i) * c[i];
  return acc;
}

} // namespace detail

/// The inverse closed-loop susceptibility as an entire function
///   f(w) = P0(w) + e^{i w tau} P1(w)
/// in units of the mechanical frequency (w, kappa, detunings, couplings and
/// gamma_m all divided by omega_m). Its zeros are the poles of the
/// susceptibility: zeros with positive imaginary part mean growing
/// oscillations. P0 collects the delay-free (backaction-only) dynamics and
/// P1 the feedback loop, which always carries the sqrt(eta) prefactor.
struct QuasiPolynomial {
  std::array<Cx, 7> p0{}; // ascending powers of w
  std::array<Cx, 3> p1{};
  double tau = 0.0;         // normalized delay, omega_m * tau
  double omega_scale = 1.0; // omega_m, for converting to SI
  double kappa_norm = 0.0;  // kappa / omega_m
  double dh_norm = 0.0;     // delta_h_eff / omega_m
  double dv_norm = 0.0;     // delta_v_eff / omega_m

  Cx eval_normalized(Cx w) const {
    return detail::horner(p0, w) +
           std::exp(Cx(0.0, 1.0) * tau * w) * detail::horner(p1, w);
  }
  Cx deriv_normalized(Cx w) const {
    const Cx e = std::exp(Cx(0.0, 1.0) * tau * w);
    return detail::horner_deriv(p0, w) +
           e * (detail::horner_deriv(p1, w) +
                Cx(0.0, 1.0) * tau * detail::horner(p1, w));
  }
  Cx eval(Cx omega_si) const { return eval_normalized(omega_si / omega_scale); }

  /// Roots of the delay-free part P0 via the companion matrix, in SI rad/s.
  std::vector<Cx> p0_roots() const {
    int deg = 6;
    while (deg > 0 && std::abs(p0[deg]) == 0.0) --deg;
    std::vector<Cx> roots;
    if (deg == 0) return roots;
    Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -p0[i] / p0[deg];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
    for (int i = 0; i < deg; ++i)
      roots.push_back(es.eigenvalues()(i) * omega_scale);
    return roots;
  }

  /// Newton refinement of a root from a seed (both SI). Returns the
  /// converged root or the last iterate; callers check the residual.
  Cx newton_root(Cx seed_si, int max_iter = 100) const {
    Cx w = seed_si / omega_scale;
    for (int i = 0; i < max_iter; ++i) {
      const Cx f = eval_normalized(w);
      const Cx fp = deriv_normalized(w);
      if (fp == Cx(0.0)) break;
      const Cx step = f / fp;
      w -= step;
      if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(w))) break;
    }
    return w * omega_scale;
  }
};

namespace detail {

// Polynomial helpers on ascending-coefficient arrays.
template <std::size_t NA, std::size_t NB>
inline std::array<Cx, NA + NB - 1> poly_mul(const std::array<Cx, NA>& a,
                                            const std::array<Cx, NB>& b) {
  std::array<Cx, NA + NB - 1> out{};
  for (std::size_t i = 0; i < NA; ++i)
    for (std::size_t j = 0; j < NB; ++j) out[i + j] += a[i] * b[j];
  return out;
}

} // namespace detail

/// Builds the quasi-polynomial from a solved operating point. Derivation:
/// eliminating P and both cavity blocks from (A + i w I) X = -b turns the Q
/// equation into
///   [(1 - w^2 - i gamma w) d_h d_v + 4 g_h^2 dlt_h d_v + 4 g_v^2 dlt_v d_h
///    - 4 g_h g_v E0 e^{i w tau} (s cos(g)(dlt_h + dlt_v)
///                                + sin(g)(dlt_h dlt_v - s^2))] Q = forcing,
/// with s = kappa/2 - i w, d = s^2 + dlt^2 and E0 = sqrt(eta) kappa_in.
inline QuasiPolynomial make_quasipoly(const SteadyState& ss,
                                      const SystemParams& p) {
  using detail::poly_mul;
  const double om = p.omega_m;
  const double k = p.kappa / om;
  const double kin = p.kappa_in / om;
  const double gm = p.gamma_m / om;
  const double dh = ss.delta_h_eff / om;
  const double dv = ss.delta_v_eff / om;
  const double gh = std::abs(ss.g_h) / om;
  const double gv = std::abs(ss.g_v) / om;
  const double g = ss.gamma_angle;

  const std::array<Cx, 2> s{Cx(k / 2.0, 0.0), Cx(0.0, -1.0)};
  const auto s2 = poly_mul(s, s);
  std::array<Cx, 3> d_h = s2;
  d_h[0] += dh * dh;
  std::array<Cx, 3> d_v = s2;
  d_v[0] += dv * dv;
  const std::array<Cx, 3> mech{Cx(1.0, 0.0), Cx(0.0, -gm), Cx(-1.0, 0.0)};

  QuasiPolynomial qp;
  qp.tau = p.tau * om;
  qp.omega_scale = om;
  qp.kappa_norm = k;
  qp.dh_norm = dh;
  qp.dv_norm = dv;
  const auto core = poly_mul(poly_mul(mech, d_h), d_v);
  for (std::size_t i = 0; i < core.size(); ++i) qp.p0[i] = core[i];
  for (std::size_t i = 0; i < 3; ++i) {
    qp.p0[i] += 4.0 * gh * gh * dh * d_v[i];
    qp.p0[i] += 4.0 * gv * gv * dv * d_h[i];
  }

  const double e0 = std::sqrt(p.eta_loop) * kin;
  std::array<Cx, 3> p1{};
  p1[0] += std::cos(g) * (dh + dv) * s[0];
  p1[1] += std::cos(g) * (dh + dv) * s[1];
  p1[0] += std::sin(g) * dh * dv;
  for (std::size_t i = 0; i < 3; ++i) p1[i] -= std::sin(g) * s2[i];
  for (std::size_t i = 0; i < 3; ++i) qp.p1[i] = -4.0 * gh * gv * e0 * p1[i];
  return qp;
}

} // namespace cfc
