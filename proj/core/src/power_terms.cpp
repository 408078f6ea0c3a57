#include "regimeshift/power_terms.hpp"

#include <cmath>
#include <stdexcept>

namespace regimeshift {

PowerSum& PowerSum::add(double coef, double exponent, double scale, int log_power) {
  if (log_power != 0 && log_power != 1) throw std::invalid_argument("log_power must be 0 or 1");
  if (coef != 0.0) terms_.push_back({coef, exponent, scale, log_power});
  return *this;
}

PowerSum& PowerSum::add_linear(double slope, double intercept) {
  add(slope, 1.0);
  add(intercept, 0.0);
  return *this;
}

double power_log_derivative(double x, double exponent, int log_power, int order) {
  // d^n/dx^n x^e = ff_n(e) x^(e-n), ff_n the falling factorial; differentiating
  // in e gives d^n/dx^n (x^e ln x) = x^(e-n) [ff_n(e) ln x + ff_n'(e)].
  double ff = 1.0;
  double dff = 0.0;
  for (int i = 0; i < order; ++i) {
    const double f = exponent - i;
    dff = dff * f + ff;
    ff *= f;
  }
  // pow rather than exp(e ln x) keeps integer powers such as S itself exact
  const double base = std::pow(x, exponent - order);
  if (log_power == 0) return ff == 0.0 ? 0.0 : ff * base;
  return base * (ff * std::log(x) + dff);
}

double PowerSum::derivative(double spot, int order) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    const double x = spot / t.scale;
    const double d = power_log_derivative(x, t.exponent, t.log_power, order);
    sum += t.coef * d * std::pow(t.scale, -order);
  }
  return sum;
}

}  // namespace regimeshift
