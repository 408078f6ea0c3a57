#pragma once

#include <optional>
#include <string_view>

#include "regimeshift/exponents.hpp"
#include "regimeshift/market.hpp"

namespace regimeshift {

/// Which formula family governs the pre-change price.
enum class Phase {
  EqualRegimes,         ///< β_a = β_b: H_a = H_b and P_a = P_b
  Case1,                ///< |β_a| >= |β_b|: single pre-change formula, root of 𝒢
  Case2,                ///< |β_a| <  |β_b|: inner/middle formulas, root of ℋ
  CallNoDividendStop,   ///< call, δ_a > 0, δ_b = 0: H_b = ∞, algebraic H_a
  CallDividendStart,    ///< call, δ_a = 0, δ_b > 0: H_a = ∞
  NeverExercise,        ///< call, δ_a = δ_b = 0: P = S
};

std::string_view to_string(Phase phase) noexcept;

struct HeuristicBoundary {
  std::optional<double> boundary;    ///< Ĥ_a
  std::optional<double> root;        ///< χ̂₀ (Case1) or η̂₀ (Case2), Ĥ_a = root · H_b
  std::optional<double> discarded;   ///< the other 𝒢 zero in Case2, if any
  bool exists() const noexcept { return boundary.has_value(); }
};

struct BoundarySolution {
  Phase phase = Phase::Case1;
  double H_b = 0.0;              ///< may be +inf
  double H_a = 0.0;              ///< may be +inf
  std::optional<double> root;    ///< η₀ (Case1) or χ₀ (Case2)
  HeuristicBoundary heuristic;
};

/// β_b K / (β_b - 1); +inf for a call with β_b = 1.
double post_change_boundary(const DerivedExponents& exps, const OptionSpec& spec);

/// 𝒢±(η) = A η^(1-β_b) - η^(-β_b) ∓ B. Throws UnsupportedError if A or B is singular.
double g_aux(double eta, const DerivedExponents& exps);
double g_aux_derivative(double eta, const DerivedExponents& exps);
/// Location of the single extremum of 𝒢: γ_a / (γ_a - 1).
double g_aux_extremum(const DerivedExponents& exps);

/// ℋ±(χ) = χ^(-γ∓) ∓ C χ^(1-γ∓) ± D. Throws UnsupportedError if C or D is singular.
double h_aux(double chi, const DerivedExponents& exps);
double h_aux_derivative(double chi, const DerivedExponents& exps);

Phase classify_phase(const DerivedExponents& exps, const MarketParams& params,
                     const OptionSpec& spec);

/// η₀ with 𝒢(η₀) = 0: in (0, 1] for calls, [1, ∞) for puts.
double solve_case1_root(const DerivedExponents& exps, const OptionSpec& spec);

/// χ₀ with ℋ(χ₀) = 0: in (1, ∞) for calls, (0, 1) for puts. Empty when no finite
/// root exists (call with δ_a = 0, where H_a = ∞).
std::optional<double> solve_case2_root(const DerivedExponents& exps, const OptionSpec& spec);

/// Out-of-domain (metastable) boundary. Case1 uses the unique zero of ℋ on
/// (0, ∞); Case2 uses a zero of 𝒢 on (0, ∞), of which there are two or none.
/// Given two, the one with the larger Case1-formula price at S = K is kept.
HeuristicBoundary solve_heuristic(const DerivedExponents& exps, const MarketParams& params,
                                  const OptionSpec& spec);

/// Full boundary set for (params, spec), including the heuristic counterpart
/// in Case1/Case2.
BoundarySolution solve_boundaries(const MarketParams& params, const OptionSpec& spec);
BoundarySolution solve_boundaries(const DerivedExponents& exps, const MarketParams& params,
                                  const OptionSpec& spec);

struct LambdaSearchRange {
  double lo = 1e-6;
  double hi = 1e3;
  double abs_tol = 1e-6;
};

/// Intensity λ̄ above which no Case2 heuristic boundary exists: the extremum of
/// 𝒢 crosses zero. Empty when the heuristic exists across the whole range (or
/// never does, e.g. for EqualRegimes inputs).
std::optional<double> critical_lambda(const MarketParams& params, const OptionSpec& spec,
                                      LambdaSearchRange range = {});

/// Residual scale used for root acceptance: max(1, |coefficients|, |terms at x|).
double g_residual_scale(double eta, const DerivedExponents& exps);
double h_residual_scale(double chi, const DerivedExponents& exps);

}  // namespace regimeshift
