#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <vector>

#include "cfc/quasipoly.hpp"

namespace cfc {

enum class StabilityMethod { argument_principle, sufficient_bound };
enum class StabilityVerdict { stable, unstable, marginal };

/// Rectangle in the complex frequency plane, SI rad/s.
struct ComplexRect {
  double re_min = 0.0, re_max = 0.0;
  double im_min = 0.0, im_max = 0.0;
};

/// Pole census of the inverse susceptibility over a search region. With the
/// argument-principle method the verdict is exact for the searched region:
/// stable iff no pole sits above the marginality band. The sufficient-bound
/// method is one-sided: "stable" is a proof, "unstable" only means
/// not-proven-stable.
struct StabilityReport {
  StabilityVerdict verdict = StabilityVerdict::stable;
  int pole_count_upper_half = 0;
  Cx nearest_pole{0.0, 0.0}; // closest to the real axis that was found
  StabilityMethod method = StabilityMethod::argument_principle;
  ComplexRect search_region;
};

/// Marginality band: poles closer to the real axis than this fraction of the
/// intrinsic mechanical damping cannot be resolved and are reported as
/// marginal rather than stable/unstable.
inline double marginal_band(const SystemParams& p) { return 1e-3 * p.gamma_m; }

inline ComplexRect default_search_region(const SystemParams& p) {
  return {0.0, p.omega_m + 5.0 * p.kappa, marginal_band(p),
          p.omega_m + 2.0 * p.kappa};
}

namespace detail {

/// Winding number of f along the rectangle boundary, tracked by adaptive
/// edge subdivision: each segment is split until the phase step is < pi/2.
inline int winding_number(const QuasiPolynomial& qp, const ComplexRect& r) {
  const double sc = qp.omega_scale;
  const Cx c0(r.re_min / sc, r.im_min / sc), c1(r.re_max / sc, r.im_min / sc);
  const Cx c2(r.re_max / sc, r.im_max / sc), c3(r.re_min / sc, r.im_max / sc);
  const Cx corners[5] = {c0, c1, c2, c3, c0};
  double total = 0.0;
  struct Seg {
    Cx a, b, fa, fb;
    int depth;
  };
  std::vector<Seg> stack;
  for (int e = 0; e < 4; ++e) {
    const Cx fa = qp.eval_normalized(corners[e]);
    const Cx fb = qp.eval_normalized(corners[e + 1]);
    if (fa == Cx(0.0) || fb == Cx(0.0))
      throw ContourAmbiguous("zero of the inverse susceptibility on contour");
    stack.push_back({corners[e], corners[e + 1], fa, fb, 0});
    while (!stack.empty()) {
      const Seg s = stack.back();
      stack.pop_back();
      const double dphi = std::arg(s.fb / s.fa);
      if (std::abs(dphi) < pi / 2.0) {
        total += dphi;
        continue;
      }
      if (s.depth >= 48)
        throw ContourAmbiguous(
            "phase refinement exhausted; pole too close to contour");
      const Cx m = 0.5 * (s.a + s.b);
      const Cx fm = qp.eval_normalized(m);
      if (fm == Cx(0.0))
        throw ContourAmbiguous("zero of the inverse susceptibility on contour");
      stack.push_back({s.a, m, s.fa, fm, s.depth + 1});
      stack.push_back({m, s.b, fm, s.fb, s.depth + 1});
    }
  }
  return static_cast<int>(std::llround(total / two_pi));
}

/// Best-effort localization of the pole nearest the real axis: Newton from
/// the real-axis residual minima. f(-conj(w)) = -conj(f(w)), so searching
/// Re >= 0 covers the mirrored half plane.
inline Cx nearest_pole_estimate(const QuasiPolynomial& qp,
                                const ComplexRect& r) {
  const double sc = qp.omega_scale;
  Cx best(0.0, std::numeric_limits<double>::infinity());
  const int n = 1600;
  double prev2 = 0.0, prev1 = 0.0;
  std::vector<double> seeds;
  for (int i = 0; i <= n; ++i) {
    const double w = r.re_min / sc + (r.re_max - r.re_min) / sc * i / n;
    const double f = std::abs(qp.eval_normalized(Cx(w, 0.0)));
    if (i >= 2 && prev1 < prev2 && prev1 < f)
      seeds.push_back(r.re_min / sc + (r.re_max - r.re_min) / sc * (i - 1) / n);
    prev2 = prev1;
    prev1 = f;
  }
  seeds.push_back(1.0); // the mechanical resonance in normalized units
  for (double seed : seeds) {
    const Cx root = qp.newton_root(Cx(seed, 0.0) * sc);
    const Cx rn = root / sc;
    if (std::abs(qp.eval_normalized(rn)) >
        1e-6 * (1.0 + std::abs(qp.eval_normalized(Cx(seed, 0.0)))))
      continue;
    if (std::abs(root.imag()) < std::abs(best.imag())) best = root;
  }
  return best;
}

} // namespace detail

/// Decides stability from the zeros of the inverse susceptibility. The
/// argument-principle method counts zeros of the transcendental function
/// (delay factor included) inside the upper-half rectangle via contour
/// winding; the sufficient-bound method proves stability for every delay at
/// once by requiring the delay-free part to be zero-free in the upper half
/// plane and to dominate the loop term on the real axis.
inline StabilityReport check_stability(
    const SteadyState& ss, const SystemParams& p, const ComplexRect& region,
    StabilityMethod method = StabilityMethod::argument_principle,
    double sufficient_margin = 0.95) {
  const QuasiPolynomial qp = make_quasipoly(ss, p);
  StabilityReport rep;
  rep.method = method;
  rep.search_region = region;
  const double band = marginal_band(p);

  if (method == StabilityMethod::argument_principle) {
    ComplexRect r = region;
    r.im_min = std::max(r.im_min, band); // count only resolvable growth
    rep.pole_count_upper_half = detail::winding_number(qp, r);
    rep.nearest_pole = detail::nearest_pole_estimate(qp, region);
    if (rep.pole_count_upper_half > 0)
      rep.verdict = StabilityVerdict::unstable;
    else if (std::abs(rep.nearest_pole.imag()) <= band)
      rep.verdict = StabilityVerdict::marginal;
    else
      rep.verdict = StabilityVerdict::stable;
    return rep;
  }

  // Sufficient bound (delay independent). Conservative by construction: a
  // stable verdict here implies the argument-principle verdict.
  const auto roots = qp.p0_roots();
  bool proven = true;
  for (const Cx& root : roots)
    if (root.imag() > -band) proven = false;
  auto dominated = [&](double w_norm) {
    const Cx p0 = detail::horner(qp.p0, Cx(w_norm, 0.0));
    const Cx p1 = detail::horner(qp.p1, Cx(w_norm, 0.0));
    return std::abs(p1) < sufficient_margin * std::abs(p0);
  };
  if (proven) {
    const int n = 4000;
    for (int i = 0; i <= n && proven; ++i) {
      const double w =
          (region.re_min + (region.re_max - region.re_min) * i / n) /
          qp.omega_scale;
      if (!dominated(w)) proven = false;
    }
    // |P0| dips near its almost-real roots can be far narrower than the
    // coarse grid; probe them directly so the bound stays one-sided.
    for (const Cx& root : roots) {
      if (!proven) break;
      const double re = root.real() / qp.omega_scale;
      const double im = std::abs(root.imag()) / qp.omega_scale;
      for (double off : {0.0, -1.0, 1.0, -3.0, 3.0, -10.0, 10.0})
        if (!dominated(re + off * im)) {
          proven = false;
          break;
        }
    }
  }
  rep.pole_count_upper_half = proven ? 0 : -1; // -1: not determined
  rep.nearest_pole = detail::nearest_pole_estimate(qp, region);
  rep.verdict = proven ? StabilityVerdict::stable : StabilityVerdict::unstable;
  return rep;
}

inline StabilityReport check_stability(
    const SteadyState& ss, const SystemParams& p,
    StabilityMethod method = StabilityMethod::argument_principle,
    double sufficient_margin = 0.95) {
  return check_stability(ss, p, default_search_region(p), method,
                         sufficient_margin);
}

/// Cell states for stability masks; serialized as the integer values.
enum class MaskCell : int { stable = 0, unstable = 1, undetermined = 2, marginal = 3 };

} // namespace cfc
