#pragma once

#include <optional>

#include "regimeshift/market.hpp"

namespace regimeshift {

/// Relative tolerance deciding formula-family switches such as
/// beta_a == beta_b, beta_b == 1 or beta_b == gamma_a.
inline constexpr double kEqualityTolerance = 1e-9;

bool nearly_equal(double a, double b, double rel_tol = kEqualityTolerance) noexcept;

/// Roots of ½σ²x(x-1) + (r-δ)x - ρ = 0 with ρ = r (β) or ρ = r + λ (γ).
struct CharacteristicRoots {
  double plus = 1.0;
  double minus = -1.0;
  /// plus - 1, computed without cancellation; exactly 0 iff δ = 0 and ρ = r.
  double plus_minus_one = 0.0;
};

CharacteristicRoots characteristic_roots(double r, double delta, double sigma,
                                         double extra_intensity = 0.0);

/// Every exponent and coefficient derived from (params, spec).
///
/// The `*_a`, `*_b` β/γ fields hold both signs. The unsuffixed fields
/// (beta_a, beta_b, gamma, gamma_opp, ...) are the kind-matched choices used
/// by the pricing formulas: for a call gamma = γ⁺ and gamma_opp = γ⁻, for a put
/// the reverse. Coefficients whose denominators vanish are left empty.
struct DerivedExponents {
  OptionKind kind = OptionKind::Put;

  double theta_a = 0.0;
  double theta_b = 0.0;
  double beta_plus_a = 1.0;
  double beta_minus_a = -1.0;
  double beta_plus_b = 1.0;
  double beta_minus_b = -1.0;
  double gamma_plus_a = 1.0;
  double gamma_minus_a = -1.0;

  double beta_a = 0.0;
  double beta_b = 0.0;
  double gamma = 0.0;
  double gamma_opp = 0.0;
  double beta_a_minus_one = 0.0;
  double beta_b_minus_one = 0.0;
  double gamma_minus_one = 0.0;
  double one_minus_gamma_opp = 0.0;

  double ell = 0.0;
  std::optional<double> coeff_A;
  std::optional<double> coeff_B;
  std::optional<double> coeff_C;
  std::optional<double> coeff_D;
};

DerivedExponents compute_exponents(const MarketParams& params, const OptionSpec& spec);

/// Kind-matched β_a (resp. β_b) equals 1 within kEqualityTolerance; for a call
/// this is the δ = 0 limit in which the exercise boundary runs off to infinity.
bool unit_beta_a(const DerivedExponents& exps) noexcept;
bool unit_beta_b(const DerivedExponents& exps) noexcept;

/// |β±_a| / |β±_b| for the kind-matched sign.
double order_parameter(const DerivedExponents& exps);

}  // namespace regimeshift
