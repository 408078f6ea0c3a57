#pragma once

#include <cmath>
#include <optional>
#include <utility>

// Bracketed scalar root finding: bisection to a tight relative width, then a
// few guarded Newton steps that must stay in the bracket and reduce |f|.

namespace regimeshift::detail {

inline constexpr double kBisectionRelWidth = 1e-12;
inline constexpr int kMaxNewtonPolish = 5;
inline constexpr int kMaxBracketSteps = 2048;

template <class F, class DF>
double bisect_then_newton(F&& f, DF&& df, double lo, double hi) {
  double flo = f(lo);
  if (flo == 0.0) return lo;
  if (f(hi) == 0.0) return hi;
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (hi - lo <= kBisectionRelWidth * std::abs(mid)) break;
    const double fm = f(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  double fx = f(x);
  for (int i = 0; i < kMaxNewtonPolish && fx != 0.0; ++i) {
    const double d = df(x);
    if (d == 0.0 || !std::isfinite(d)) break;
    const double xn = x - fx / d;
    if (!(xn >= lo && xn <= hi)) break;
    const double fn = f(xn);
    if (!(std::abs(fn) < std::abs(fx))) break;
    x = xn;
    fx = fn;
  }
  return x;
}

/// Walk x = start·factor^k until sign(f(x)) == target_sign. Returns the last two
/// points (previous, current) or nothing if the walk over/underflows.
template <class F>
std::optional<std::pair<double, double>> walk_to_sign(F&& f, double start, double factor,
                                                      bool want_positive) {
  double prev = start;
  double x = start;
  for (int k = 0; k < kMaxBracketSteps; ++k) {
    x = prev * factor;
    if (!(x > 0.0) || !std::isfinite(x)) return std::nullopt;
    const double fx = f(x);
    if (std::isnan(fx)) return std::nullopt;
    if ((fx > 0.0) == want_positive && fx != 0.0) return std::make_pair(prev, x);
    if (fx == 0.0) return std::make_pair(x, x);
    prev = x;
  }
  return std::nullopt;
}

}  // namespace regimeshift::detail
