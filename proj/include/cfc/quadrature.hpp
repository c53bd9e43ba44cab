#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <vector>

#include "cfc/errors.hpp"

namespace cfc {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

namespace detail {

// Gauss-Kronrod 15-point nodes/weights on [-1, 1] (7-point Gauss embedded).
inline constexpr double gk15_nodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double gk15_weights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double g7_weights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Interval {
  double a, b, value, error;
  bool operator<(const Interval& o) const { return error < o.error; }
};

template <typename F>
inline Interval gk15(const F& f, double a, double b) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  double kronrod = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    const double y = f(c + h * gk15_nodes[i]);
    kronrod += gk15_weights[i] * y;
    if (i % 2 == 1) gauss += g7_weights[i / 2] * y;
  }
  kronrod *= h;
  gauss *= h;
  // Plain |K - G| is a conservative error estimate for the embedded pair.
  return {a, b, kronrod, std::abs(kronrod - gauss)};
}

} // namespace detail

/// Globally adaptive Gauss-Kronrod integration over a pre-segmented domain.
/// Segments let callers pin known sharp features (narrow resonances) so the
/// subdivision never has to discover them from scratch.
template <typename F>
QuadratureResult integrate_adaptive(const F& f,
                                    const std::vector<double>& breakpoints,
                                    double rel_tol, double abs_tol = 0.0,
                                    int max_intervals = 4000) {
  if (breakpoints.size() < 2)
    throw ValidationError("integrate_adaptive: need at least one segment");
  std::priority_queue<detail::Interval> heap;
  double total = 0.0, err = 0.0;
  long evals = 0;
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    if (!(breakpoints[i] < breakpoints[i + 1]))
      throw ValidationError("integrate_adaptive: breakpoints must increase");
    auto iv = detail::gk15(f, breakpoints[i], breakpoints[i + 1]);
    evals += 15;
    total += iv.value;
    err += iv.error;
    heap.push(iv);
  }
  int n = static_cast<int>(heap.size());
  while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
    if (n >= max_intervals)
      throw IntegrationFailure(
          "adaptive quadrature exhausted its interval budget");
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      // Interval at floating-point resolution; accept its estimate.
      heap.push({worst.a, worst.b, worst.value, 0.0});
      err -= worst.error;
      continue;
    }
    const auto left = detail::gk15(f, worst.a, mid);
    const auto right = detail::gk15(f, mid, worst.b);
    evals += 30;
    total += left.value + right.value - worst.value;
    err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++n;
  }
  return {total, err, evals};
}

} // namespace cfc
