#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace regimeshift {

/// A CSV-shaped table; empty cells are std::nullopt.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::optional<double>>> rows;

  void write_csv(std::ostream& os) const;
  std::string to_csv() const;
};

/// 200 log-spaced moneyness points over [0.2, 3].
std::vector<double> default_moneyness_grid();

/// Price vs moneyness of the call for δ_a ∈ {0, 0.5%, 1%, 2%} (δ_b = 2.5%).
Table figure1();
/// Relative gap (P - P̂)/P of the put vs moneyness, per mean change time 1/λ.
Table figure2();
/// Exact and heuristic put prices vs moneyness per λ; heuristic cells empty above λ̄.
Table figure3();
/// (H_a - Ĥ_a)/K vs the order parameter |β⁻_a|/|β⁻_b|, sweeping σ_a, per λ.
Table figure4();

/// n ∈ {1, 2, 3, 4}; throws DomainError otherwise.
Table figure(int n);

/// Shortest "%.12g" rendering; "inf"/"-inf" for infinities.
std::string format_number(double x);

}  // namespace regimeshift
