#include "regimeshift/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "regimeshift/errors.hpp"
#include "regimeshift/formulas.hpp"
#include "roots.hpp"

namespace regimeshift {

namespace {

constexpr double kAcceptResidual = 1e-13;

double require(const std::optional<double>& c, const char* name) {
  if (!c) {
    throw UnsupportedError(std::string("coefficient ") + name +
                           " is singular for these parameters (beta_b = 1 or gamma_a^opp = 1)");
  }
  return *c;
}

double pow_safe(double x, double e) { return std::exp(e * std::log(x)); }

/// Bracket-and-solve for a root that is known to lie between 1 and the far end
/// selected by `outward` (2 grows, 0.5 shrinks).
template <class F, class DF>
std::optional<double> solve_from_one(F&& f, DF&& df, double factor, double scale_at_one) {
  const double f1 = f(1.0);
  if (f1 == 0.0) return 1.0;
  const auto br = detail::walk_to_sign(f, 1.0, factor, !(f1 > 0.0));
  if (!br) {
    (void)scale_at_one;
    return std::nullopt;
  }
  const double lo = std::min(br->first, br->second);
  const double hi = std::max(br->first, br->second);
  return detail::bisect_then_newton(f, df, lo, hi);
}

// Expected sign of the auxiliary function at 1 on the in-domain side.
bool g_positive_at_one(OptionKind kind) { return kind == OptionKind::Call; }

}  // namespace

std::string_view to_string(Phase phase) noexcept {
  switch (phase) {
    case Phase::EqualRegimes: return "EqualRegimes";
    case Phase::Case1: return "Case1";
    case Phase::Case2: return "Case2";
    case Phase::CallNoDividendStop: return "CallNoDividendStop";
    case Phase::CallDividendStart: return "CallDividendStart";
    case Phase::NeverExercise: return "NeverExercise";
  }
  return "Unknown";
}

double post_change_boundary(const DerivedExponents& exps, const OptionSpec& spec) {
  if (spec.kind == OptionKind::Call && unit_beta_b(exps)) return INFINITY;
  return exps.beta_b * spec.strike / exps.beta_b_minus_one;
}

double g_aux(double eta, const DerivedExponents& e) {
  const double A = require(e.coeff_A, "A");
  const double B = require(e.coeff_B, "B");
  const double s = kind_sign(e.kind);
  return A * pow_safe(eta, -e.beta_b_minus_one) - pow_safe(eta, -e.beta_b) - s * B;
}

double g_aux_derivative(double eta, const DerivedExponents& e) {
  const double A = require(e.coeff_A, "A");
  return -A * e.beta_b_minus_one * pow_safe(eta, -e.beta_b) +
         e.beta_b * pow_safe(eta, -e.beta_b - 1.0);
}

double g_aux_extremum(const DerivedExponents& e) { return e.gamma / e.gamma_minus_one; }

double h_aux(double chi, const DerivedExponents& e) {
  const double C = require(e.coeff_C, "C");
  const double D = require(e.coeff_D, "D");
  const double s = kind_sign(e.kind);
  return pow_safe(chi, -e.gamma_opp) - s * C * pow_safe(chi, e.one_minus_gamma_opp) + s * D;
}

double h_aux_derivative(double chi, const DerivedExponents& e) {
  const double C = require(e.coeff_C, "C");
  const double s = kind_sign(e.kind);
  return -e.gamma_opp * pow_safe(chi, -e.gamma_opp - 1.0) -
         s * C * e.one_minus_gamma_opp * pow_safe(chi, -e.gamma_opp);
}

double g_residual_scale(double eta, const DerivedExponents& e) {
  const double A = e.coeff_A.value_or(0.0);
  const double B = e.coeff_B.value_or(0.0);
  return std::max({1.0, std::abs(A), std::abs(B), std::abs(A * pow_safe(eta, -e.beta_b_minus_one)),
                   pow_safe(eta, -e.beta_b)});
}

double h_residual_scale(double chi, const DerivedExponents& e) {
  const double C = e.coeff_C.value_or(0.0);
  const double D = e.coeff_D.value_or(0.0);
  return std::max({1.0, std::abs(C), std::abs(D), pow_safe(chi, -e.gamma_opp),
                   std::abs(C * pow_safe(chi, e.one_minus_gamma_opp))});
}

Phase classify_phase(const DerivedExponents& exps, const MarketParams& params,
                     const OptionSpec& spec) {
  validate(params);
  validate(spec);
  const bool call = spec.kind == OptionKind::Call;
  if (call && unit_beta_a(exps) && unit_beta_b(exps)) return Phase::NeverExercise;
  if (nearly_equal(exps.beta_a, exps.beta_b)) return Phase::EqualRegimes;
  if (call && unit_beta_b(exps)) return Phase::CallNoDividendStop;
  if (call && unit_beta_a(exps)) return Phase::CallDividendStart;
  return std::abs(exps.beta_a) >= std::abs(exps.beta_b) ? Phase::Case1 : Phase::Case2;
}

double solve_case1_root(const DerivedExponents& exps, const OptionSpec& spec) {
  auto f = [&](double x) { return g_aux(x, exps); };
  auto df = [&](double x) { return g_aux_derivative(x, exps); };
  const double f1 = f(1.0);
  const bool want_at_one = g_positive_at_one(spec.kind);
  if (f1 == 0.0) return 1.0;
  if ((f1 > 0.0) != want_at_one) {
    // Only reachable through rounding when ell is ~0: the root sits at 1.
    if (std::abs(f1) <= kAcceptResidual * 1e3 * g_residual_scale(1.0, exps)) return 1.0;
    throw SolverError(SolverError::Kind::InternalConsistency,
                      "G has the wrong sign at eta = 1; parameters are not Case1");
  }
  const double factor = spec.kind == OptionKind::Call ? 0.5 : 2.0;
  const auto root = solve_from_one(f, df, factor, g_residual_scale(1.0, exps));
  if (!root) {
    throw SolverError(SolverError::Kind::InternalConsistency,
                      "could not bracket the zero of G in Case1");
  }
  return *root;
}

std::optional<double> solve_case2_root(const DerivedExponents& exps, const OptionSpec& spec) {
  if (spec.kind == OptionKind::Call && unit_beta_a(exps)) return std::nullopt;
  if (exps.coeff_C && *exps.coeff_C == 0.0 && spec.kind == OptionKind::Call) return std::nullopt;
  auto f = [&](double x) { return h_aux(x, exps); };
  auto df = [&](double x) { return h_aux_derivative(x, exps); };
  const double f1 = f(1.0);
  if (f1 == 0.0) return 1.0;
  // In-domain sign at 1: positive for calls (root above 1), negative for puts.
  const bool want_at_one = spec.kind == OptionKind::Call;
  if ((f1 > 0.0) != want_at_one) {
    if (std::abs(f1) <= kAcceptResidual * 1e3 * h_residual_scale(1.0, exps)) return 1.0;
    throw SolverError(SolverError::Kind::BracketFailure,
                      "H has the wrong sign at chi = 1; parameters are not Case2");
  }
  const double factor = spec.kind == OptionKind::Call ? 2.0 : 0.5;
  const auto root = solve_from_one(f, df, factor, h_residual_scale(1.0, exps));
  if (!root) {
    throw SolverError(SolverError::Kind::BracketFailure, "could not bracket the zero of H in Case2");
  }
  return *root;
}

namespace {

HeuristicBoundary heuristic_case1(const DerivedExponents& exps, double H_b) {
  auto f = [&](double x) { return h_aux(x, exps); };
  auto df = [&](double x) { return h_aux_derivative(x, exps); };
  const double f1 = f(1.0);
  HeuristicBoundary out;
  if (f1 == 0.0) {
    out.root = 1.0;
  } else {
    // Single zero on (0, ∞): search both directions for the first sign change.
    double up = 1.0;
    double down = 1.0;
    for (int k = 0; k < detail::kMaxBracketSteps && !out.root; ++k) {
      const double up_next = up * 2.0;
      const double down_next = down * 0.5;
      const double fu = f(up_next);
      const double fd = f(down_next);
      if (std::isfinite(fu) && (fu > 0.0) != (f1 > 0.0)) {
        out.root = detail::bisect_then_newton(f, df, up, up_next);
      } else if (std::isfinite(fd) && (fd > 0.0) != (f1 > 0.0)) {
        out.root = detail::bisect_then_newton(f, df, down_next, down);
      }
      up = up_next;
      down = down_next;
      if (!std::isfinite(up) || !(down > 0.0)) break;
    }
  }
  if (out.root) out.boundary = *out.root * H_b;
  return out;
}

HeuristicBoundary heuristic_case2(const DerivedExponents& exps, const MarketParams& params,
                                  const OptionSpec& spec, double H_b, double H_a) {
  auto f = [&](double x) { return g_aux(x, exps); };
  auto df = [&](double x) { return g_aux_derivative(x, exps); };
  const double s = kind_sign(spec.kind);
  const double eta_m = g_aux_extremum(exps);
  const double g_m = f(eta_m);
  HeuristicBoundary out;
  // Far from the extremum s·𝒢 < 0; zeros exist iff s·𝒢(η_M) >= 0.
  if (!(s * g_m >= 0.0)) return out;
  if (g_m == 0.0) {
    out.root = eta_m;
    out.boundary = eta_m * H_b;
    return out;
  }
  const bool far_positive = s < 0.0;
  const auto left = detail::walk_to_sign(f, eta_m, 0.5, far_positive);
  const auto right = detail::walk_to_sign(f, eta_m, 2.0, far_positive);
  std::optional<double> z_lo;
  std::optional<double> z_hi;
  if (left) z_lo = detail::bisect_then_newton(f, df, left->second, left->first);
  if (right) z_hi = detail::bisect_then_newton(f, df, right->first, right->second);
  if (!z_lo && !z_hi) return out;
  if (!z_lo || !z_hi) {
    out.root = z_lo ? *z_lo : *z_hi;
    out.boundary = *out.root * H_b;
    return out;
  }

  double pick = *z_hi;
  double other = *z_lo;
  try {
    const double K = spec.strike;
    auto price_at_strike = [&](double eta) {
      const double H = eta * H_b;
      if (!on_live_side(K, H, spec.kind)) return payoff(K, spec);
      return formulas::case1(exps, params, spec, H, H_b).value(K);
    };
    if (price_at_strike(*z_lo) > price_at_strike(*z_hi)) std::swap(pick, other);
  } catch (const UnsupportedError&) {
    // Case1 form singular (λ + ℓ = 0): keep the zero nearest the optimal ratio.
    const double target = H_a / H_b;
    if (std::abs(std::log(*z_lo / target)) < std::abs(std::log(*z_hi / target))) {
      std::swap(pick, other);
    }
  }
  out.root = pick;
  out.discarded = other;
  out.boundary = pick * H_b;
  return out;
}

}  // namespace

HeuristicBoundary solve_heuristic(const DerivedExponents& exps, const MarketParams& params,
                                  const OptionSpec& spec) {
  if (params.lambda == 0.0) return {};
  const Phase phase = classify_phase(exps, params, spec);
  const double H_b = post_change_boundary(exps, spec);
  if (phase == Phase::Case1) return heuristic_case1(exps, H_b);
  if (phase == Phase::Case2) {
    const auto chi = solve_case2_root(exps, spec);
    const double H_a = chi ? *chi * H_b : INFINITY;
    return heuristic_case2(exps, params, spec, H_b, H_a);
  }
  return {};
}

BoundarySolution solve_boundaries(const MarketParams& params, const OptionSpec& spec) {
  return solve_boundaries(compute_exponents(params, spec), params, spec);
}

BoundarySolution solve_boundaries(const DerivedExponents& exps, const MarketParams& params,
                                  const OptionSpec& spec) {
  BoundarySolution sol;
  sol.phase = classify_phase(exps, params, spec);
  sol.H_b = post_change_boundary(exps, spec);

  if (params.lambda == 0.0) {
    // The change never happens: regime-a single-regime boundary.
    const bool infinite = spec.kind == OptionKind::Call && unit_beta_a(exps);
    sol.H_a = infinite ? INFINITY : exps.beta_a * spec.strike / exps.beta_a_minus_one;
    if (std::isfinite(sol.H_a) && std::isfinite(sol.H_b)) sol.root = sol.H_a / sol.H_b;
    return sol;
  }

  switch (sol.phase) {
    case Phase::NeverExercise:
      sol.H_a = INFINITY;
      break;
    case Phase::EqualRegimes:
      sol.H_a = sol.H_b;
      sol.root = 1.0;
      break;
    case Phase::CallNoDividendStop:
      sol.H_a = formulas::call_div_stop_boundary(exps, params, spec.strike);
      break;
    case Phase::CallDividendStart:
      sol.H_a = INFINITY;
      break;
    case Phase::Case1:
      sol.root = solve_case1_root(exps, spec);
      sol.H_a = *sol.root * sol.H_b;
      sol.heuristic = heuristic_case1(exps, sol.H_b);
      break;
    case Phase::Case2: {
      sol.root = solve_case2_root(exps, spec);
      sol.H_a = sol.root ? *sol.root * sol.H_b : INFINITY;
      sol.heuristic = heuristic_case2(exps, params, spec, sol.H_b, sol.H_a);
      break;
    }
  }
  return sol;
}

std::optional<double> critical_lambda(const MarketParams& params, const OptionSpec& spec,
                                      LambdaSearchRange range) {
  const auto exists_at = [&](double lambda) {
    MarketParams p = params;
    p.lambda = lambda;
    const auto e = compute_exponents(p, spec);
    return kind_sign(spec.kind) * g_aux(g_aux_extremum(e), e) >= 0.0;
  };
  {
    MarketParams p = params;
    p.lambda = range.lo;
    const auto e = compute_exponents(p, spec);
    if (classify_phase(e, p, spec) != Phase::Case2) return std::nullopt;
  }
  double lo = range.lo;
  double hi = range.hi;
  if (!exists_at(lo) || exists_at(hi)) return std::nullopt;
  // Bisect in log λ first for range, then finish in absolute terms.
  while (hi - lo > range.abs_tol * 1e-3) {
    const double mid = (hi / lo > 4.0) ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
    if (exists_at(mid)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace regimeshift
