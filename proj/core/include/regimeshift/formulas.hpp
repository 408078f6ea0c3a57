#pragma once

#include "regimeshift/exponents.hpp"
#include "regimeshift/market.hpp"
#include "regimeshift/power_terms.hpp"

// Closed-form price branches as power sums, for arbitrary boundary values.
// Each builder is valid only on the spot interval named in its comment; the
// pricing engine decides where to use which. An infinite H_a drops the terms
// that vanish in that limit.

namespace regimeshift::formulas {

/// ±(H_b - K)(S/H_b)^β_b, live side of H_b.
PowerSum post_change(const DerivedExponents& e, const OptionSpec& spec, double H_b);

/// ±(H - K)(S/H)^β_a with H = β_a K/(β_a - 1); S itself for a call with β_a = 1.
PowerSum single_regime(const DerivedExponents& e, const OptionSpec& spec, double H);

/// Live side of H_a with H_a on the live side of H_b. Throws UnsupportedError
/// when λ + ℓ = 0.
PowerSum case1(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
               double H_a, double H_b);

/// Live side of H_b (Case2 inner interval). Requires β_b ≠ γ_a.
PowerSum case2_inner(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
                     double H_a, double H_b);

/// Between H_b and H_a (Case2 middle interval).
PowerSum case2_middle(const DerivedExponents& e, const MarketParams& p, const OptionSpec& spec,
                      double H_a, double H_b);

/// β_b → γ_a limit of case2_inner; carries the logarithmic term.
PowerSum degenerate_inner(const DerivedExponents& e, const MarketParams& p,
                          const OptionSpec& spec, double H_a, double H_b);

/// Call with δ_b = 0, S <= H_a.
PowerSum call_div_stop(const DerivedExponents& e, const MarketParams& p, double strike,
                       double H_a);
/// H_a for the δ_b = 0 call: γ(1 + λ/δ_a) K / (γ - 1).
double call_div_stop_boundary(const DerivedExponents& e, const MarketParams& p, double strike);

/// Call with δ_a = 0 (H_a = ∞): S <= H_b and S > H_b respectively.
PowerSum call_div_start_inner(const DerivedExponents& e, const MarketParams& p, double strike,
                              double H_b);
PowerSum call_div_start_middle(const DerivedExponents& e, const MarketParams& p, double strike,
                               double H_b);

/// ±(S - K)
PowerSum intrinsic(const OptionSpec& spec);
/// S
PowerSum underlying();

/// True when β_b and γ_a collide and case2_inner must give way to degenerate_inner.
bool resonant(const DerivedExponents& e) noexcept;

}  // namespace regimeshift::formulas
