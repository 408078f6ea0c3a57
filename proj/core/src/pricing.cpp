#include "regimeshift/pricing.hpp"

#include <cmath>
#include <string>

#include "regimeshift/errors.hpp"
#include "regimeshift/formulas.hpp"

namespace regimeshift {

namespace {

constexpr double kInf = INFINITY;

void check_spot(double spot) {
  if (!std::isfinite(spot) || !(spot > 0.0)) {
    throw DomainError("spot must be finite and positive, got " + std::to_string(spot));
  }
}

/// Live side of a single boundary H, intrinsic on the other side.
std::vector<Branch> one_boundary(OptionKind kind, double H, BranchTag live_tag, PowerSum live,
                                 const OptionSpec& spec) {
  if (std::isinf(H)) return {{0.0, kInf, live_tag, std::move(live)}};
  if (kind == OptionKind::Call) {
    return {{0.0, H, live_tag, std::move(live)},
            {H, kInf, BranchTag::Intrinsic, formulas::intrinsic(spec)}};
  }
  return {{0.0, H, BranchTag::Intrinsic, formulas::intrinsic(spec)},
          {H, kInf, live_tag, std::move(live)}};
}

/// Inner formula on the live side of H_b, middle between H_b and H_a, intrinsic
/// beyond H_a. Assumes H_a on the exercise side of H_b.
std::vector<Branch> two_boundaries(OptionKind kind, double H_a, double H_b, BranchTag inner_tag,
                                   PowerSum inner, BranchTag middle_tag, PowerSum middle,
                                   const OptionSpec& spec) {
  if (kind == OptionKind::Call) {
    std::vector<Branch> out{{0.0, H_b, inner_tag, std::move(inner)},
                            {H_b, H_a, middle_tag, std::move(middle)}};
    if (std::isfinite(H_a)) out.push_back({H_a, kInf, BranchTag::Intrinsic, formulas::intrinsic(spec)});
    return out;
  }
  return {{0.0, H_a, BranchTag::Intrinsic, formulas::intrinsic(spec)},
          {H_a, H_b, middle_tag, std::move(middle)},
          {H_b, kInf, inner_tag, std::move(inner)}};
}

bool exercise_side_of(double H, double ref, OptionKind kind) {
  return kind == OptionKind::Call ? H > ref : H < ref;
}

std::vector<Branch> case2_branches(const DerivedExponents& e, const MarketParams& p,
                                   const OptionSpec& spec, double H_a, double H_b) {
  const bool res = formulas::resonant(e);
  PowerSum inner = res ? formulas::degenerate_inner(e, p, spec, H_a, H_b)
                       : formulas::case2_inner(e, p, spec, H_a, H_b);
  return two_boundaries(spec.kind, H_a, H_b,
                        res ? BranchTag::Degenerate : BranchTag::PreCase2Inner, std::move(inner),
                        BranchTag::PreCase2Middle, formulas::case2_middle(e, p, spec, H_a, H_b),
                        spec);
}

const PriceModel& require_phase(const PriceModel& m, std::initializer_list<Phase> phases,
                                const char* what) {
  for (Phase p : phases) {
    if (m.boundary.phase == p) return m;
  }
  throw UnsupportedError(std::string(what) + " does not apply to phase " +
                         std::string(to_string(m.boundary.phase)));
}

}  // namespace

std::vector<Branch> family_branches(const PriceModel& m, Phase family, double H_a) {
  const auto& e = m.exps;
  const auto& p = m.params;
  const auto& spec = m.spec;
  const double H_b = m.boundary.H_b;
  switch (family) {
    case Phase::EqualRegimes:
      return one_boundary(spec.kind, H_a, BranchTag::PostChange, formulas::post_change(e, spec, H_a),
                          spec);
    case Phase::Case1:
      return one_boundary(spec.kind, H_a, BranchTag::PreCase1,
                          formulas::case1(e, p, spec, H_a, H_b), spec);
    case Phase::Case2:
      if (std::isinf(H_a) || exercise_side_of(H_a, H_b, spec.kind)) {
        return case2_branches(e, p, spec, H_a, H_b);
      } else {
        // H_a on the live side of H_b: the middle interval is empty.
        const bool res = formulas::resonant(e);
        PowerSum inner = res ? formulas::degenerate_inner(e, p, spec, H_a, H_b)
                             : formulas::case2_inner(e, p, spec, H_a, H_b);
        return one_boundary(spec.kind, H_a, res ? BranchTag::Degenerate : BranchTag::PreCase2Inner,
                            std::move(inner), spec);
      }
    case Phase::CallNoDividendStop:
      return one_boundary(spec.kind, H_a, BranchTag::DivStop,
                          formulas::call_div_stop(e, p, spec.strike, H_a), spec);
    case Phase::CallDividendStart:
    case Phase::NeverExercise:
      break;
  }
  throw UnsupportedError("no boundary-parameterised formula family for phase " +
                         std::string(to_string(family)));
}

std::string_view to_string(BranchTag tag) noexcept {
  switch (tag) {
    case BranchTag::PostChange: return "PostChange";
    case BranchTag::PreCase1: return "Pre-Case1";
    case BranchTag::PreCase2Inner: return "Pre-Case2-Inner";
    case BranchTag::PreCase2Middle: return "Pre-Case2-Middle";
    case BranchTag::Degenerate: return "Degenerate";
    case BranchTag::DivStop: return "DivStop";
    case BranchTag::DivStartInner: return "DivStart-Inner";
    case BranchTag::DivStartMiddle: return "DivStart-Middle";
    case BranchTag::Intrinsic: return "Intrinsic";
    case BranchTag::Underlying: return "Underlying";
    case BranchTag::SingleRegime: return "SingleRegime";
  }
  return "Unknown";
}

std::vector<double> PriceModel::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < branches.size(); ++i) out.push_back(branches[i].lo);
  return out;
}

PriceModel build_price_model(const MarketParams& params, const OptionSpec& spec) {
  PriceModel m;
  m.params = params;
  m.spec = spec;
  m.exps = compute_exponents(params, spec);
  m.boundary = solve_boundaries(m.exps, params, spec);
  const auto& e = m.exps;
  const auto& b = m.boundary;
  const OptionKind kind = spec.kind;

  m.post_change = std::isinf(b.H_b)
                      ? std::vector<Branch>{{0.0, kInf, BranchTag::Underlying, formulas::underlying()}}
                      : one_boundary(kind, b.H_b, BranchTag::PostChange,
                                     formulas::post_change(e, spec, b.H_b), spec);

  if (b.phase == Phase::NeverExercise) {
    m.branches = {{0.0, kInf, BranchTag::Underlying, formulas::underlying()}};
    return m;
  }
  if (params.lambda == 0.0) {
    m.branches = one_boundary(kind, b.H_a, BranchTag::SingleRegime,
                              formulas::single_regime(e, spec, b.H_a), spec);
    return m;
  }

  switch (b.phase) {
    case Phase::NeverExercise:
      break;
    case Phase::EqualRegimes:
      m.branches = m.post_change;
      break;
    case Phase::Case1:
    case Phase::Case2:
    case Phase::CallNoDividendStop:
      m.branches = family_branches(m, b.phase, b.H_a);
      break;
    case Phase::CallDividendStart:
      if (formulas::resonant(e)) {
        m.branches = {{0.0, b.H_b, BranchTag::Degenerate,
                       formulas::degenerate_inner(e, params, spec, kInf, b.H_b)},
                      {b.H_b, kInf, BranchTag::DivStartMiddle,
                       formulas::call_div_start_middle(e, params, spec.strike, b.H_b)}};
      } else {
        m.branches = {{0.0, b.H_b, BranchTag::DivStartInner,
                       formulas::call_div_start_inner(e, params, spec.strike, b.H_b)},
                      {b.H_b, kInf, BranchTag::DivStartMiddle,
                       formulas::call_div_start_middle(e, params, spec.strike, b.H_b)}};
      }
      break;
  }
  if (b.heuristic.exists()) {
    // The metastable solution borrows the other case's formula family.
    try {
      m.heuristic = family_branches(m, b.phase == Phase::Case1 ? Phase::Case2 : Phase::Case1,
                                    *b.heuristic.boundary);
    } catch (const UnsupportedError&) {
      // Case2 on resonance: the borrowed Case1 form is singular there, so only
      // the heuristic boundary is reported.
      m.heuristic.clear();
    }
  }
  return m;
}

const Branch& branch_at(double spot, const std::vector<Branch>& branches) {
  check_spot(spot);
  for (const auto& br : branches) {
    if (br.contains(spot)) return br;
  }
  return branches.back();
}

double evaluate(double spot, const std::vector<Branch>& branches, const OptionSpec& spec) {
  const Branch& br = branch_at(spot, branches);
  if (br.tag == BranchTag::Intrinsic) return payoff(spot, spec);
  return br.formula.value(spot);
}

double price(double spot, const PriceModel& model) {
  return evaluate(spot, model.branches, model.spec);
}

double price_derivative(double spot, const PriceModel& model, int order) {
  if (order == 0) return price(spot, model);
  return branch_at(spot, model.branches).formula.derivative(spot, order);
}

double price_post_change(double spot, const PriceModel& model) {
  return evaluate(spot, model.post_change, model.spec);
}

double heuristic_price(double spot, const PriceModel& model) {
  if (model.heuristic.empty()) {
    throw UnsupportedError("no heuristic boundary exists for these parameters");
  }
  return evaluate(spot, model.heuristic, model.spec);
}

double price_pre_case1(double spot, const PriceModel& model) {
  require_phase(model, {Phase::Case1, Phase::EqualRegimes}, "price_pre_case1");
  check_spot(spot);
  const auto& b = model.boundary;
  if (!on_live_side(spot, b.H_a, model.spec.kind)) return payoff(spot, model.spec);
  return formulas::case1(model.exps, model.params, model.spec, b.H_a, b.H_b).value(spot);
}

double price_pre_case2(double spot, const PriceModel& model) {
  require_phase(model, {Phase::Case2, Phase::CallDividendStart}, "price_pre_case2");
  if (formulas::resonant(model.exps)) return price_degenerate(spot, model);
  return price(spot, model);
}

double price_degenerate(double spot, const PriceModel& model) {
  require_phase(model, {Phase::Case2, Phase::CallDividendStart}, "price_degenerate");
  check_spot(spot);
  const auto& b = model.boundary;
  if (on_live_side(spot, b.H_b, model.spec.kind) || spot == b.H_b) {
    return formulas::degenerate_inner(model.exps, model.params, model.spec, b.H_a, b.H_b)
        .value(spot);
  }
  return price(spot, model);
}

double price_call_div_stop(double spot, const PriceModel& model) {
  require_phase(model, {Phase::CallNoDividendStop}, "price_call_div_stop");
  return price(spot, model);
}

double price_call_div_start(double spot, const PriceModel& model) {
  require_phase(model, {Phase::CallDividendStart}, "price_call_div_start");
  return price(spot, model);
}

}  // namespace regimeshift
