#include "regimeshift/exponents.hpp"

#include <algorithm>
#include <cmath>

namespace regimeshift {

bool nearly_equal(double a, double b, double rel_tol) noexcept {
  return std::abs(a - b) <= rel_tol * std::max(std::abs(a), std::abs(b));
}

CharacteristicRoots characteristic_roots(double r, double delta, double sigma,
                                         double extra_intensity) {
  const double s2 = sigma * sigma;
  const double theta = r - delta - 0.5 * s2;
  const double rho = r + extra_intensity;
  const double disc = theta * theta + 2.0 * rho * s2;
  const double sq = std::sqrt(disc);

  // Pick the root free of cancellation; Vieta gives the other one.
  CharacteristicRoots roots;
  if (theta >= 0.0) {
    roots.minus = (-theta - sq) / s2;
  } else {
    const double plus = (-theta + sq) / s2;
    roots.minus = -2.0 * rho / (s2 * plus);
  }
  // (1 - x+)(1 - x-) = -2(δ + λ')/σ²
  roots.plus_minus_one = 2.0 * (delta + extra_intensity) / (s2 * (1.0 - roots.minus));
  roots.plus = 1.0 + roots.plus_minus_one;
  return roots;
}

DerivedExponents compute_exponents(const MarketParams& params, const OptionSpec& spec) {
  validate(params);
  validate(spec);

  const double r = params.r;
  const double lambda = params.lambda;
  const double s = kind_sign(spec.kind);
  const bool call = spec.kind == OptionKind::Call;

  const auto beta_a = characteristic_roots(r, params.delta_a, params.sigma_a);
  const auto beta_b = characteristic_roots(r, params.delta_b, params.sigma_b);
  const auto gamma_a = characteristic_roots(r, params.delta_a, params.sigma_a, lambda);

  DerivedExponents e;
  e.kind = spec.kind;
  e.theta_a = r - params.delta_a - 0.5 * params.sigma_a * params.sigma_a;
  e.theta_b = r - params.delta_b - 0.5 * params.sigma_b * params.sigma_b;
  e.beta_plus_a = beta_a.plus;
  e.beta_minus_a = beta_a.minus;
  e.beta_plus_b = beta_b.plus;
  e.beta_minus_b = beta_b.minus;
  e.gamma_plus_a = gamma_a.plus;
  e.gamma_minus_a = gamma_a.minus;

  if (call) {
    e.beta_a = beta_a.plus;
    e.beta_b = beta_b.plus;
    e.gamma = gamma_a.plus;
    e.gamma_opp = gamma_a.minus;
    e.beta_a_minus_one = beta_a.plus_minus_one;
    e.beta_b_minus_one = beta_b.plus_minus_one;
    e.gamma_minus_one = gamma_a.plus_minus_one;
    e.one_minus_gamma_opp = 1.0 - gamma_a.minus;
  } else {
    e.beta_a = beta_a.minus;
    e.beta_b = beta_b.minus;
    e.gamma = gamma_a.minus;
    e.gamma_opp = gamma_a.plus;
    e.beta_a_minus_one = beta_a.minus - 1.0;
    e.beta_b_minus_one = beta_b.minus - 1.0;
    e.gamma_minus_one = gamma_a.minus - 1.0;
    e.one_minus_gamma_opp = -gamma_a.plus_minus_one;
  }

  const double sa2 = params.sigma_a * params.sigma_a;
  e.ell = (e.beta_a - e.beta_b) * (r / e.beta_a + 0.5 * sa2 * e.beta_b);

  const double bb = e.beta_b;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const bool bb_one = unit_beta_b(e);
  const bool bb_gq = nearly_equal(bb, gq);
  const bool gq_one = std::abs(e.one_minus_gamma_opp) <= kEqualityTolerance * std::max(1.0, std::abs(gq));

  if (!bb_one) {
    e.coeff_A = (e.gamma_minus_one / g) * (bb / e.beta_b_minus_one);
  }
  if (!bb_one && !bb_gq) {
    e.coeff_B = (-s / e.beta_b_minus_one) * (lambda / (lambda + r)) * (gq / (bb - gq));
  }
  if (!bb_one && !gq_one) {
    e.coeff_C = -s * (gq / e.one_minus_gamma_opp) * (bb / e.beta_b_minus_one) * (params.delta_a / r);
  }
  if (!bb_gq && !gq_one) {
    e.coeff_D = s * (lambda / r) * bb / ((bb - gq) * e.one_minus_gamma_opp);
  }
  return e;
}

bool unit_beta_a(const DerivedExponents& exps) noexcept {
  return std::abs(exps.beta_a_minus_one) <= kEqualityTolerance * std::max(1.0, std::abs(exps.beta_a));
}

bool unit_beta_b(const DerivedExponents& exps) noexcept {
  return std::abs(exps.beta_b_minus_one) <= kEqualityTolerance * std::max(1.0, std::abs(exps.beta_b));
}

double order_parameter(const DerivedExponents& exps) {
  return std::abs(exps.beta_a) / std::abs(exps.beta_b);
}

}  // namespace regimeshift
