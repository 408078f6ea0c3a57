#pragma once

// Finite-difference oracle for the perpetual free-boundary problem. It shares
// nothing with the closed forms: the coupled stationary equations are solved
// on a uniform log-spot grid as one-sided obstacle problems.

#include <algorithm>
#include <cmath>
#include <vector>

#include "regimeshift/market.hpp"

namespace oracle {

struct Grid {
  std::vector<double> x;  // ln S
  std::vector<double> S;
  std::size_t strike_index = 0;
};

inline Grid make_grid(double K, double lo_mult, double hi_mult, int n) {
  Grid g;
  const double h = (std::log(hi_mult) - std::log(lo_mult)) / n;
  const long i0 = std::lround(-std::log(lo_mult) / h);
  g.strike_index = static_cast<std::size_t>(i0);
  for (int i = 0; i <= n; ++i) {
    const double x = std::log(K) + (i - i0) * h;
    g.x.push_back(x);
    g.S.push_back(std::exp(x));
  }
  return g;
}

// Thomas elimination from the bottom row up, then back substitution from the
// top with the obstacle applied at each row (Brennan-Schwartz). Exact for the
// discrete obstacle problem when the exercise region is the top end of the grid.
inline void projected_thomas(std::vector<double> a, std::vector<double> b, std::vector<double> c,
                             std::vector<double>& d, const std::vector<double>& obstacle) {
  const std::size_t n = d.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double w = a[i] / b[i - 1];
    b[i] -= w * c[i - 1];
    d[i] -= w * d[i - 1];
  }
  d[n - 1] = std::max(d[n - 1] / b[n - 1], obstacle[n - 1]);
  for (std::size_t i = n - 1; i-- > 0;) {
    d[i] = std::max((d[i] - c[i] * d[i + 1]) / b[i], obstacle[i]);
  }
}

// Root of ½σ²e(e-1) + (r-δ)e - ρ that decays away from the exercise side.
inline double decaying_root(double r, double sigma, double delta, double rho, bool call) {
  const double s2 = sigma * sigma;
  const double b = 0.5 - (r - delta) / s2;
  const double disc = std::sqrt(b * b + 2.0 * rho / s2);
  return call ? b + disc : b - disc;
}

/// Obstacle problem V >= payoff, -L V - f >= 0, complementary, with
/// L V = ½σ² V_xx + (r - δ - ½σ²) V_x - ρ V. The far out-of-the-money end
/// imposes V_x = e V with e the slowest power present there; calls use
/// dV/dS = 1 at the top and puts V = K - S at the bottom.
inline std::vector<double> solve_obstacle(const Grid& g, const regimeshift::OptionSpec& spec,
                                          double r, double sigma, double delta, double rho,
                                          const std::vector<double>& source, double far_power) {
  const std::size_t n = g.x.size();
  const double h = g.x[1] - g.x[0];
  const double mu = r - delta - 0.5 * sigma * sigma;
  const double lo = 0.5 * sigma * sigma / (h * h) - mu / (2 * h);
  const double hi = 0.5 * sigma * sigma / (h * h) + mu / (2 * h);
  const double mid = -sigma * sigma / (h * h) - rho;
  const bool call = spec.kind == regimeshift::OptionKind::Call;

  std::vector<double> payoff(n);
  for (std::size_t i = 0; i < n; ++i) payoff[i] = regimeshift::payoff(g.S[i], spec);
  std::vector<double> a(n, 0.0), b(n, 1.0), c(n, 0.0), d(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    a[i] = -lo;
    b[i] = -mid;
    c[i] = -hi;
    d[i] = source[i];
  }
  const double eh = 0.5 * far_power * h;
  if (call) {
    b[0] = 1.0 + eh;
    c[0] = -(1.0 - eh);
    a[n - 1] = -1.0;
    d[n - 1] = g.S[n - 1] - g.S[n - 2];
    projected_thomas(a, b, c, d, payoff);
    return d;
  }
  d[0] = spec.strike - g.S[0];
  a[n - 1] = -(1.0 + eh);
  b[n - 1] = 1.0 - eh;
  // Puts exercise at the bottom: solve the mirrored system.
  std::vector<double> ra(n), rb(n), rc(n), rd(n), rp(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = n - 1 - i;
    ra[i] = c[j];
    rb[i] = b[j];
    rc[i] = a[j];
    rd[i] = d[j];
    rp[i] = payoff[j];
  }
  projected_thomas(ra, rb, rc, rd, rp);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = rd[n - 1 - i];
  return v;
}

struct Solution {
  Grid grid;
  std::vector<double> pre;
  std::vector<double> post;

  /// Linear interpolation in ln S.
  double pre_at(double S) const { return interp(pre, S); }
  double post_at(double S) const { return interp(post, S); }

 private:
  double interp(const std::vector<double>& v, double S) const {
    const double x = std::log(S);
    const double h = grid.x[1] - grid.x[0];
    const double t = (x - grid.x[0]) / h;
    const auto i = static_cast<std::size_t>(t);
    if (i + 1 >= v.size()) return v.back();
    const double w = t - i;
    return (1 - w) * v[i] + w * v[i + 1];
  }
};

inline Solution solve(const regimeshift::MarketParams& p, const regimeshift::OptionSpec& spec,
                      int n = 0, double lo_mult = 1e-3, double hi_mult = 1e3) {
  Solution s;
  const bool call = spec.kind == regimeshift::OptionKind::Call;
  const double post_power = decaying_root(p.r, p.sigma_b, p.delta_b, p.r, call);
  const double own_power = decaying_root(p.r, p.sigma_a, p.delta_a, p.r + p.lambda, call);
  if (n <= 0) {
    // keep h times the steepest power small, steep profiles dominate the error
    const double steepest = std::max({std::abs(post_power), std::abs(own_power), 1.0});
    const double range = std::log(hi_mult / lo_mult);
    n = static_cast<int>(std::clamp(range * steepest / 0.01, 8000.0, 400000.0));
  }
  s.grid = make_grid(spec.strike, lo_mult, hi_mult, n);
  const std::vector<double> zero(s.grid.x.size(), 0.0);
  const double pre_power = call ? std::min(post_power, own_power) : std::max(post_power, own_power);
  s.post = solve_obstacle(s.grid, spec, p.r, p.sigma_b, p.delta_b, p.r, zero, post_power);
  std::vector<double> src(s.post.size());
  for (std::size_t i = 0; i < src.size(); ++i) src[i] = p.lambda * s.post[i];
  s.pre = solve_obstacle(s.grid, spec, p.r, p.sigma_a, p.delta_a, p.r + p.lambda, src, pre_power);
  return s;
}

}  // namespace oracle
