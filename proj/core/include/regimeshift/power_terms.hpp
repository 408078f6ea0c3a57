#pragma once

#include <span>
#include <vector>

namespace regimeshift {

/// coef · (S/scale)^exponent · ln(S/scale)^log_power, with log_power ∈ {0, 1}.
///
/// Every closed-form branch is a short sum of these, which makes analytic
/// S-derivatives of any order cheap and exact.
struct PowerTerm {
  double coef = 0.0;
  double exponent = 0.0;
  double scale = 1.0;
  int log_power = 0;
};

class PowerSum {
 public:
  PowerSum() = default;
  explicit PowerSum(std::vector<PowerTerm> terms) : terms_(std::move(terms)) {}

  PowerSum& add(double coef, double exponent, double scale = 1.0, int log_power = 0);
  /// a·S + b
  PowerSum& add_linear(double slope, double intercept);

  double value(double spot) const { return derivative(spot, 0); }
  /// n-th S-derivative, n >= 0.
  double derivative(double spot, int order) const;

  std::span<const PowerTerm> terms() const noexcept { return terms_; }
  bool empty() const noexcept { return terms_.empty(); }

 private:
  std::vector<PowerTerm> terms_;
};

/// n-th derivative of x^e · ln(x)^k (k ∈ {0,1}) at x > 0.
double power_log_derivative(double x, double exponent, int log_power, int order);

}  // namespace regimeshift
