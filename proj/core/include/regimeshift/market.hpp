#pragma once

#include <string_view>

namespace regimeshift {

/// Exogenous model: one exponentially-timed switch from regime a to regime b.
/// Rates and yields are decimal fractions per year.
struct MarketParams {
  double r = 0.04;        ///< risk-free rate (> 0)
  double lambda = 0.5;    ///< regime-change intensity (>= 0)
  double sigma_a = 0.10;  ///< volatility before the change (> 0)
  double delta_a = 0.0;   ///< dividend yield before the change (>= 0)
  double sigma_b = 0.10;  ///< volatility after the change (> 0)
  double delta_b = 0.0;   ///< dividend yield after the change (>= 0)

  friend bool operator==(const MarketParams&, const MarketParams&) = default;
};

enum class OptionKind { Call, Put };

struct OptionSpec {
  OptionKind kind = OptionKind::Put;
  double strike = 1.0;

  friend bool operator==(const OptionSpec&, const OptionSpec&) = default;
};

/// Throws DomainError when an invariant is violated.
void validate(const MarketParams& params);
void validate(const OptionSpec& spec);

/// +1 for calls, -1 for puts.
constexpr double kind_sign(OptionKind kind) noexcept {
  return kind == OptionKind::Call ? 1.0 : -1.0;
}

/// max(±(S - K), 0)
double payoff(double spot, const OptionSpec& spec) noexcept;

/// True when `spot` is on the holding side of `boundary` (call: S < H, put: S > H).
bool on_live_side(double spot, double boundary, OptionKind kind) noexcept;

std::string_view to_string(OptionKind kind) noexcept;
OptionKind parse_option_kind(std::string_view text);

}  // namespace regimeshift
