#include "regimeshift/formulas.hpp"

#include <algorithm>
#include <cmath>

#include "regimeshift/errors.hpp"

namespace regimeshift::formulas {

namespace {

double ratio_pow(double num, double den, double exponent) {
  return std::exp(exponent * std::log(num / den));
}

}  // namespace

bool resonant(const DerivedExponents& e) noexcept { return nearly_equal(e.beta_b, e.gamma); }

PowerSum post_change(const DerivedExponents& e, const OptionSpec& spec, double H_b) {
  PowerSum p;
  if (std::isinf(H_b)) return underlying();
  p.add(kind_sign(spec.kind) * (H_b - spec.strike), e.beta_b, H_b);
  return p;
}

PowerSum single_regime(const DerivedExponents& e, const OptionSpec& spec, double H) {
  if (std::isinf(H)) return underlying();
  PowerSum p;
  p.add(kind_sign(spec.kind) * (H - spec.strike), e.beta_a, H);
  return p;
}

PowerSum case1(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
               double H_a, double H_b) {
  const double lambda = p.lambda;
  const double denom = lambda + e.ell;
  if (denom == 0.0 || std::abs(denom) <= kEqualityTolerance * std::max(lambda, std::abs(e.ell))) {
    throw UnsupportedError("case1 formula is singular at lambda + ell = 0");
  }
  const double s = kind_sign(spec.kind);
  const double K = spec.strike;
  const double c = lambda / denom;
  PowerSum sum;
  sum.add(s * (H_a - K), e.gamma, H_a);
  sum.add(s * (H_b - K) * c, e.beta_b, H_b);
  sum.add(-s * (H_b - K) * c * ratio_pow(H_a, H_b, e.beta_b), e.gamma, H_a);
  return sum;
}

PowerSum case2_inner(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
                     double H_a, double H_b) {
  if (resonant(e)) throw UnsupportedError("case2 inner formula is singular at beta_b = gamma_a");
  const double s = kind_sign(spec.kind);
  const double K = spec.strike;
  const double lambda = p.lambda;
  const double r = p.r;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const double bb = e.beta_b;

  PowerSum sum;
  if (std::isfinite(H_a)) {
    const double c1 = p.delta_a / (lambda + p.delta_a) * H_a - r / (lambda + r) * K;
    sum.add(s * c1, g, H_a);
  }
  const double pref = s * lambda / (lambda + r) * K / (g - gq);
  sum.add(pref * gq / (g - bb) * bb / e.gamma_minus_one, g, H_b);
  sum.add(-pref * gq / (g - bb) * g / e.beta_b_minus_one * (g - gq) / (bb - gq), bb, H_b);
  if (std::isfinite(H_a)) {
    sum.add(-pref * g * bb / (e.one_minus_gamma_opp * (bb - gq)) * ratio_pow(H_b, H_a, g - gq), g,
            H_b);
  }
  return sum;
}

PowerSum case2_middle(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
                      double H_a, double H_b) {
  const double s = kind_sign(spec.kind);
  const double K = spec.strike;
  const double lambda = p.lambda;
  const double r = p.r;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const double bb = e.beta_b;

  PowerSum sum;
  const double m = s * lambda * K / (lambda + r) * g * bb /
                   ((g - gq) * e.one_minus_gamma_opp * (bb - gq));
  if (std::isfinite(H_a)) {
    const double c1 = p.delta_a / (lambda + p.delta_a) * H_a - r / (lambda + r) * K;
    sum.add(s * c1, g, H_a);
    sum.add(-m * ratio_pow(H_a, H_b, gq), g, H_a);
  }
  sum.add(m, gq, H_b);
  sum.add_linear(s * lambda / (lambda + p.delta_a), -s * lambda / (lambda + r) * K);
  return sum;
}

PowerSum degenerate_inner(const DerivedExponents& e, const MarketParams& p,
                          const OptionSpec& spec, double H_a, double H_b) {
  const double s = kind_sign(spec.kind);
  const double K = spec.strike;
  const double lambda = p.lambda;
  const double r = p.r;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const double gm1 = e.gamma_minus_one;

  PowerSum sum;
  if (std::isfinite(H_a)) {
    const double c1 = p.delta_a / (lambda + p.delta_a) * H_a - r / (lambda + r) * K;
    sum.add(s * c1, g, H_a);
  }
  const double pref = s * lambda / (lambda + r) * K / (g - gq);
  const double lead = pref * gq / gm1;
  sum.add(lead * ((1.0 - 2.0 * g) / gm1 - g / (g - gq)), g, H_b);
  sum.add(lead * g, g, H_b, 1);
  if (std::isfinite(H_a)) {
    sum.add(-pref * g * g / (e.one_minus_gamma_opp * (g - gq)) * ratio_pow(H_b, H_a, g - gq), g,
            H_b);
  }
  return sum;
}

double call_div_stop_boundary(const DerivedExponents& e, const MarketParams& p, double strike) {
  if (p.delta_a <= 0.0) return INFINITY;
  return e.gamma * (1.0 + p.lambda / p.delta_a) * strike / e.gamma_minus_one;
}

PowerSum call_div_stop(const DerivedExponents& e, const MarketParams& p, double strike,
                       double H_a) {
  const double lambda = p.lambda;
  const double da = p.delta_a;
  PowerSum sum;
  sum.add(da / (lambda + da) * H_a - strike, e.gamma, H_a);
  sum.add(lambda / (lambda + da), 1.0);
  return sum;
}

PowerSum call_div_start_inner(const DerivedExponents& e, const MarketParams& p, double strike,
                              double H_b) {
  const double lambda = p.lambda;
  const double r = p.r;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const double bb = e.beta_b;
  PowerSum sum;
  sum.add(lambda / (lambda + r) * bb / (g - gq) * gq / (e.gamma_minus_one * (g - bb)) * strike, g,
          H_b);
  sum.add((H_b - strike) * lambda / (lambda + e.ell), bb, H_b);
  return sum;
}

PowerSum call_div_start_middle(const DerivedExponents& e, const MarketParams& p, double strike,
                               double H_b) {
  const double lambda = p.lambda;
  const double r = p.r;
  const double g = e.gamma;
  const double gq = e.gamma_opp;
  const double bb = e.beta_b;
  PowerSum sum;
  sum.add(lambda / (lambda + r) * bb / (g - gq) * g / (e.one_minus_gamma_opp * (bb - gq)) * strike,
          gq, H_b);
  sum.add_linear(1.0, -lambda / (lambda + r) * strike);
  return sum;
}

PowerSum intrinsic(const OptionSpec& spec) {
  PowerSum sum;
  const double s = kind_sign(spec.kind);
  sum.add_linear(s, -s * spec.strike);
  return sum;
}

PowerSum underlying() {
  PowerSum sum;
  sum.add(1.0, 1.0);
  return sum;
}

}  // namespace regimeshift::formulas
