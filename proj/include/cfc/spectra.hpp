#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cfc/quadrature.hpp"
#include "cfc/quasipoly.hpp"
#include "cfc/spectrum.hpp"
#include "cfc/transfer.hpp"

namespace cfc {

/// Controls for the phonon-occupation integral.
struct IntegrationPolicy {
  double rel_tol = 1e-6;
  int max_intervals = 8000;
  double window_linewidths = 50.0; // half-window in effective linewidths...
  double window_kappas = 10.0;     // ...or in cavity linewidths, whichever wins
};

struct PhononResult {
  double n_bar = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

/// Locates the mechanical pole of the closed-loop susceptibility: Newton on
/// the quasi-polynomial from the real-axis |f| minimum near omega_m.
/// Returns omega_eff - i gamma_eff/2 in SI rad/s.
inline Cx mechanical_pole(const SteadyState& ss, const SystemParams& p) {
  const QuasiPolynomial qp = make_quasipoly(ss, p);
  double best_w = 1.0, best_f = std::abs(qp.eval_normalized(Cx(1.0, 0.0)));
  for (int i = 0; i <= 800; ++i) {
    const double w = 0.2 + 1.6 * i / 800.0;
    const double f = std::abs(qp.eval_normalized(Cx(w, 0.0)));
    if (f < best_f) {
      best_f = f;
      best_w = w;
    }
  }
  const Cx pole = qp.newton_root(Cx(best_w, 0.0) * qp.omega_scale);
  if (!std::isfinite(pole.real()) || !std::isfinite(pole.imag()))
    throw NumericalError("mechanical pole search failed");
  return pole;
}

namespace detail {

/// Breakpoints that bracket both narrow mechanical peaks (at +-omega_eff)
/// and the broad cavity pedestal, over [-w_max, w_max].
inline std::vector<double> phonon_breakpoints(double omega_eff,
                                              double gamma_eff, double kappa,
                                              double w_max) {
  std::vector<double> pts{-w_max, 0.0, w_max};
  for (double sign : {-1.0, 1.0}) {
    const double base = sign * omega_eff;
    for (double m : {1.0, 10.0, 100.0, 1e3, 1e4, 1e5}) {
      pts.push_back(base - m * gamma_eff);
      pts.push_back(base + m * gamma_eff);
    }
    pts.push_back(base - kappa);
    pts.push_back(base + kappa);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <=
                                 1e-12 * std::max(std::abs(a), std::abs(b));
                        }),
            pts.end());
  std::erase_if(pts, [w_max](double x) { return x < -w_max || x > w_max; });
  return pts;
}

} // namespace detail

/// Phonon occupation from the weighted spectral integral
///   n = 1/(4 pi) Int (1 + w^2/Om^2) S_QQ(w) dw - 1/2,
/// with the weight applied inside the quadrature and an analytic 1/w^2 tail
/// bound added beyond the integration window. Callers are responsible for
/// only integrating stable configurations.
inline PhononResult phonon_occupation(const SteadyState& ss,
                                      const SystemParams& p,
                                      const NoiseModel& noise,
                                      const IntegrationPolicy& policy = {}) {
  const Cx pole = mechanical_pole(ss, p);
  const double omega_eff = std::abs(pole.real());
  const double gamma_eff = std::max(2.0 * std::abs(pole.imag()), p.gamma_m);
  const double w_max =
      omega_eff + std::max(policy.window_linewidths * gamma_eff,
                           policy.window_kappas * p.kappa);
  auto integrand = [&](double w) {
    return (1.0 + w * w / (p.omega_m * p.omega_m)) * s_qq(ss, p, noise, w);
  };
  const auto pts =
      detail::phonon_breakpoints(omega_eff, gamma_eff, p.kappa, w_max);
  const auto q = integrate_adaptive(integrand, pts, policy.rel_tol, 0.0,
                                    policy.max_intervals);
  // Far tail falls off as 1/w^2 (thermal forcing against the free-mass
  // response); bound it by matching at the window edges.
  const double c_tail =
      0.5 * w_max * w_max * (integrand(w_max) + integrand(-w_max));
  const double tail = 2.0 * c_tail / w_max;
  PhononResult r;
  r.n_bar = (q.value + tail) / (4.0 * pi) - 0.5;
  r.error = (q.error + tail) / (4.0 * pi);
  r.evaluations = q.evaluations;
  return r;
}

/// Samples a detected-PSD spectrum on a grid.
inline Spectrum detected_spectrum(const SteadyState& ss, const SystemParams& p,
                                  const NoiseModel& noise,
                                  const FrequencyGrid& grid) {
  Spectrum s;
  s.grid = grid;
  s.quantity = SpectrumQuantity::s_ydet;
  s.normalization = SpectrumNormalization::snl_half;
  s.values.reserve(grid.points.size());
  for (double w : grid.points) s.values.push_back(detected_psd(ss, p, noise, w));
  return s;
}

inline Spectrum position_spectrum(const SteadyState& ss, const SystemParams& p,
                                  const NoiseModel& noise,
                                  const FrequencyGrid& grid) {
  Spectrum s;
  s.grid = grid;
  s.quantity = SpectrumQuantity::s_qq;
  s.normalization = SpectrumNormalization::absolute;
  s.values.reserve(grid.points.size());
  for (double w : grid.points) s.values.push_back(s_qq(ss, p, noise, w));
  return s;
}

/// Area-ratio thermometry: scales a calibrated phonon number by the ratio of
/// spectral peak areas, n = n_calib / area_calib * area_det.
inline double phonons_from_area_ratio(double n_calib, double area_calib,
                                      double area_det) {
  if (!(area_calib > 0.0))
    throw ValidationError("phonons_from_area_ratio: calibration area <= 0");
  return n_calib / area_calib * area_det;
}

} // namespace cfc
