#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "regimeshift/boundary.hpp"
#include "regimeshift/exponents.hpp"
#include "regimeshift/market.hpp"
#include "regimeshift/power_terms.hpp"

namespace regimeshift {

enum class BranchTag {
  PostChange,
  PreCase1,
  PreCase2Inner,
  PreCase2Middle,
  Degenerate,
  DivStop,
  DivStartInner,
  DivStartMiddle,
  Intrinsic,
  Underlying,
  SingleRegime,  ///< λ = 0: the change never happens
};

std::string_view to_string(BranchTag tag) noexcept;

/// One closed-form piece, valid for lo < S <= hi.
struct Branch {
  double lo = 0.0;
  double hi = 0.0;
  BranchTag tag = BranchTag::Intrinsic;
  PowerSum formula;

  bool contains(double spot) const noexcept { return spot > lo && spot <= hi; }
};

struct PriceModel {
  MarketParams params;
  OptionSpec spec;
  DerivedExponents exps;
  BoundarySolution boundary;
  std::vector<Branch> branches;            ///< pre-change price, partitions (0, ∞)
  std::vector<Branch> post_change;         ///< price once the change has happened
  std::vector<Branch> heuristic;           ///< empty when no heuristic boundary exists

  /// Interior breakpoints of `branches`, increasing.
  std::vector<double> breakpoints() const;
};

PriceModel build_price_model(const MarketParams& params, const OptionSpec& spec);

/// Pre-change price. Throws DomainError for S <= 0 or non-finite S.
double price(double spot, const PriceModel& model);
/// n-th S-derivative of the branch containing S (0 in the exercise region for n >= 2).
double price_derivative(double spot, const PriceModel& model, int order);
const Branch& branch_at(double spot, const std::vector<Branch>& branches);

double price_post_change(double spot, const PriceModel& model);

/// Heuristic (non-optimal) price. Throws UnsupportedError when no heuristic
/// boundary exists for the model.
double heuristic_price(double spot, const PriceModel& model);

/// Formula-level entry points that bypass the phase dispatcher. Each throws
/// UnsupportedError when the model's phase does not admit the formula.
double price_pre_case1(double spot, const PriceModel& model);
double price_pre_case2(double spot, const PriceModel& model);
double price_degenerate(double spot, const PriceModel& model);
double price_call_div_stop(double spot, const PriceModel& model);
double price_call_div_start(double spot, const PriceModel& model);

/// Branch table of the given phase's formula family with H_a replaced by an
/// arbitrary boundary, keeping H_b. Used for the heuristic price and for
/// boundary-perturbation scans.
std::vector<Branch> family_branches(const PriceModel& model, Phase family, double H_a);

/// Evaluates a branch table with the exercise region returning the exact payoff.
double evaluate(double spot, const std::vector<Branch>& branches, const OptionSpec& spec);

}  // namespace regimeshift
