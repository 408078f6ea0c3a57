#include <gtest/gtest.h>

#include <cmath>

#include "lcp_oracle.hpp"
#include "random_params.hpp"
#include "regimeshift/boundary.hpp"
#include "regimeshift/formulas.hpp"
#include "regimeshift/pricing.hpp"

using namespace regimeshift;

namespace {

const OptionSpec kPut{OptionKind::Put, 1.0};
const OptionSpec kCall{OptionKind::Call, 1.0};
const MarketParams kFig2{0.04, 0.5, 0.10, 0.0, 0.25, 0.0};
const MarketParams kFig3{0.04, 0.4, 0.40, 0.0175, 0.25, 0.0175};
const MarketParams kCallCase1{0.04, 0.5, 0.15, 0.03, 0.30, 0.03};

MarketParams with_lambda(MarketParams p, double lambda) {
  p.lambda = lambda;
  return p;
}

// Golden-section maximiser of H -> V(spot; H), independent of the auxiliary roots.
template <class F>
double argmax(F&& f, double lo, double hi) {
  const double phi = (std::sqrt(5.0) - 1) / 2;
  double a = lo, b = hi;
  double c = b - phi * (b - a), d = a + phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < 200 && b - a > 1e-13 * b; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(PostChangeBoundary, Examples) {
  // β⁺ = 2 when δ = (σ² + r)/2.
  const auto e2 = compute_exponents({0.04, 0.5, 0.2, 0.04, 0.2, 0.04}, kCall);
  EXPECT_NEAR(e2.beta_b, 2.0, 1e-12);
  EXPECT_NEAR(post_change_boundary(e2, kCall), 2.0, 1e-11);
  EXPECT_NEAR(post_change_boundary(compute_exponents(kFig2, kPut), kPut), 1.28 / 2.28, 1e-12);
  EXPECT_TRUE(std::isinf(post_change_boundary(compute_exponents(kFig2, kCall), kCall)));
}

TEST(AuxiliaryG, ValueAtOneIsEllBOverLambda) {
  for (const auto& [p, spec] : {std::pair{kFig2, kPut}, std::pair{kCallCase1, kCall},
                                std::pair{kFig3, kPut}, std::pair{kFig3, kCall}}) {
    const auto e = compute_exponents(p, spec);
    const double expected = kind_sign(spec.kind) * e.ell * *e.coeff_B / p.lambda;
    EXPECT_NEAR(g_aux(1.0, e), expected, 1e-14 * std::max(1.0, std::abs(expected)));
  }
}

TEST(AuxiliaryG, CallShape) {
  const auto e = compute_exponents(kCallCase1, kCall);
  EXPECT_LT(g_aux(1e-8, e), -1e6);
  const double eta_m = g_aux_extremum(e);
  EXPECT_GT(eta_m, 1.0);
  EXPECT_NEAR(g_aux_derivative(eta_m, e), 0.0, 1e-12);
  EXPECT_GT(g_aux(eta_m, e), g_aux(eta_m * 0.99, e));
  EXPECT_GT(g_aux(eta_m, e), g_aux(eta_m * 1.01, e));
}

TEST(AuxiliaryH, CallShape) {
  const MarketParams no_div{0.04, 0.5, 0.3, 0.0, 0.2, 0.02};
  const auto e0 = compute_exponents(no_div, kCall);
  EXPECT_EQ(*e0.coeff_C, 0.0);
  EXPECT_GT(*e0.coeff_D, 0.0);
  for (double chi : {1e-6, 0.1, 1.0, 10.0, 1e6}) EXPECT_GT(h_aux(chi, e0), 0.0);

  const auto e = compute_exponents(with_lambda(kFig3, 0.3), kCall);
  // H' = 0 where gamma' chi^(-gamma'-1) = C (gamma' - 1) chi^(-gamma')
  const double chi_m = e.gamma_opp / (*e.coeff_C * (e.gamma_opp - 1.0));
  ASSERT_GT(chi_m, 0.0);
  EXPECT_NEAR(h_aux_derivative(chi_m, e), 0.0, 1e-12 * std::abs(e.gamma_opp) * std::pow(chi_m, -e.gamma_opp - 1));
  const double h_m = h_aux(chi_m, e);
  EXPECT_GT((h_aux(chi_m * 1.01, e) - h_m) * (h_aux(chi_m * 0.99, e) - h_m), 0.0);
  EXPECT_LT(h_aux(1e8, e), 0.0);
}

TEST(ClassifyPhase, Examples) {
  auto phase = [](MarketParams p, OptionSpec s) { return classify_phase(compute_exponents(p, s), p, s); };
  EXPECT_EQ(phase({0.04, 0.5, 0.2, 0.02, 0.2, 0.02}, kPut), Phase::EqualRegimes);
  EXPECT_EQ(phase({0.04, 0.5, 0.1, 0.02, 0.1, 0.0}, kCall), Phase::CallNoDividendStop);
  EXPECT_EQ(phase({0.04, 0.5, 0.1, 0.0, 0.1, 0.025}, kCall), Phase::CallDividendStart);
  EXPECT_EQ(phase({0.04, 0.5, 0.2, 0.0, 0.3, 0.0}, kCall), Phase::NeverExercise);
  // Equal regimes without dividends is still a never-exercised call.
  EXPECT_EQ(phase({0.04, 0.5, 0.2, 0.0, 0.2, 0.0}, kCall), Phase::NeverExercise);
  EXPECT_EQ(phase(kFig2, kPut), Phase::Case1);
  EXPECT_EQ(phase(kFig3, kPut), Phase::Case2);
  EXPECT_EQ(phase(kCallCase1, kCall), Phase::Case1);
}

TEST(Case1Root, EqualBetaGivesUnitRoot) {
  const MarketParams p{0.04, 0.5, 0.2, 0.02, 0.2, 0.02};
  const auto e = compute_exponents(p, kPut);
  EXPECT_EQ(solve_case1_root(e, kPut), 1.0);
  const auto b = solve_boundaries(p, kPut);
  EXPECT_EQ(b.H_a, b.H_b);
}

TEST(Case1Root, Fig2Put) {
  const auto p = with_lambda(kFig2, 0.5);
  const auto m = build_price_model(p, kPut);
  ASSERT_EQ(m.boundary.phase, Phase::Case1);
  EXPECT_GE(*m.boundary.root, 1.0);
  EXPECT_GE(m.boundary.H_a, m.boundary.H_b);
  EXPECT_NEAR(price(m.boundary.H_a, m), 1.0 - m.boundary.H_a, 1e-15);
  // Reference values from an independent 40-digit evaluation.
  EXPECT_NEAR(m.boundary.H_a, 0.683095, 1e-6);
  EXPECT_NEAR(price(1.0, m), 0.181731, 1e-6);
}

TEST(Case1Root, MatchesMaximalPrinciple) {
  for (const auto& [p, spec] : {std::pair{kFig2, kPut}, std::pair{kCallCase1, kCall}}) {
    const auto m = build_price_model(p, spec);
    const double K = spec.strike;
    const double S = spec.kind == OptionKind::Call ? 0.9 * m.boundary.H_a : 1.1 * m.boundary.H_a;
    auto value = [&](double H) {
      return formulas::case1(m.exps, p, spec, H, m.boundary.H_b).value(S);
    };
    const double lo = spec.kind == OptionKind::Call ? std::max(K, 0.5 * m.boundary.H_a) : m.boundary.H_b;
    const double hi = spec.kind == OptionKind::Call ? m.boundary.H_b : std::min(K, 1.5 * m.boundary.H_a);
    EXPECT_NEAR(argmax(value, lo, hi), m.boundary.H_a, 1e-6 * m.boundary.H_a);
  }
}

TEST(Case1Root, CallInsideUnitInterval) {
  const auto m = build_price_model(kCallCase1, kCall);
  ASSERT_EQ(m.boundary.phase, Phase::Case1);
  EXPECT_GT(*m.boundary.root, 0.0);
  EXPECT_LT(*m.boundary.root, 1.0);
  const auto* live = &m.branches.front();
  EXPECT_NEAR(live->formula.derivative(m.boundary.H_a, 1), 1.0, 1e-8);
}

TEST(Case2Root, Fig3Put) {
  const auto m = build_price_model(kFig3, kPut);
  ASSERT_EQ(m.boundary.phase, Phase::Case2);
  EXPECT_LT(*m.boundary.root, 1.0);
  EXPECT_LT(m.boundary.H_a, m.boundary.H_b);
  EXPECT_NEAR(m.boundary.H_a, 0.381136, 1e-6);
  EXPECT_NEAR(price(1.0, m), 0.294781, 1e-6);
}

TEST(Case2Root, CallWithoutDividendsHasNoFiniteRoot) {
  const MarketParams p{0.04, 0.5, 0.3, 0.0, 0.2, 0.02};
  const auto e = compute_exponents(p, kCall);
  EXPECT_FALSE(solve_case2_root(e, kCall).has_value());
  EXPECT_TRUE(std::isinf(solve_boundaries(p, kCall).H_a));
}

TEST(Case2Root, SmallIntensityLimit) {
  for (const auto& spec : {kPut, kCall}) {
    const auto p = with_lambda(kFig3, 1e-10);
    const auto e = compute_exponents(p, spec);
    const double single = (spec.kind == OptionKind::Put ? e.beta_minus_a : e.beta_plus_a) /
                          ((spec.kind == OptionKind::Put ? e.beta_minus_a : e.beta_plus_a) - 1.0);
    const auto chi = solve_case2_root(e, spec);
    ASSERT_TRUE(chi);
    EXPECT_NEAR(*chi, single / (e.beta_b / e.beta_b_minus_one), 1e-6 * *chi);
  }
}

TEST(Boundary, AgreesWithObstacleSolver) {
  for (const auto& [p, spec] : {std::pair{kFig2, kPut}, std::pair{kFig3, kPut},
                                std::pair{kCallCase1, kCall}, std::pair{with_lambda(kFig3, 0.3), kCall}}) {
    const auto b = solve_boundaries(p, spec);
    const auto sol = oracle::solve(p, spec);
    // Last node of the exercise region that touches the live side.
    double edge = 0.0;
    const auto& S = sol.grid.S;
    for (std::size_t i = 1; i + 1 < S.size(); ++i) {
      const bool ex = sol.pre[i] - payoff(S[i], spec) < 1e-12;
      const bool ex_next = sol.pre[i + 1] - payoff(S[i + 1], spec) < 1e-12;
      if (spec.kind == OptionKind::Put && ex && !ex_next) edge = S[i];
      if (spec.kind == OptionKind::Call && !ex && ex_next && edge == 0.0) edge = S[i + 1];
    }
    const double h = sol.grid.x[1] - sol.grid.x[0];
    EXPECT_LT(std::abs(std::log(edge / b.H_a)), 3 * h) << b.H_a << " vs " << edge;
  }
}

TEST(Heuristic, Fig2BoundaryBelowOptimal) {
  for (double inv : {0.5, 1.0, 2.0, 5.0}) {
    const auto b = solve_boundaries(with_lambda(kFig2, 1.0 / inv), kPut);
    ASSERT_TRUE(b.heuristic.exists());
    EXPECT_LE(*b.heuristic.boundary, b.H_a);
  }
}

TEST(Heuristic, Fig3ExistenceAroundCriticalIntensity) {
  const auto above = solve_boundaries(with_lambda(kFig3, 0.6), kPut);
  EXPECT_FALSE(above.heuristic.exists());
  const auto below = solve_boundaries(with_lambda(kFig3, 0.3), kPut);
  ASSERT_TRUE(below.heuristic.exists());
  EXPECT_LT(*below.heuristic.boundary, below.H_a);
  ASSERT_TRUE(below.heuristic.discarded.has_value());
}

TEST(Heuristic, KeepsTheZeroWithTheLargerReferencePrice) {
  const auto p = with_lambda(kFig3, 0.3);
  const auto m = build_price_model(p, kPut);
  const auto& h = m.boundary.heuristic;
  auto at_strike = [&](double eta) {
    const double H = eta * m.boundary.H_b;
    return formulas::case1(m.exps, p, kPut, H, m.boundary.H_b).value(1.0);
  };
  EXPECT_GT(at_strike(*h.root), at_strike(*h.discarded));
  EXPECT_NEAR(g_aux(*h.root, m.exps), 0.0, 1e-12);
  EXPECT_NEAR(g_aux(*h.discarded, m.exps), 0.0, 1e-12);
}

TEST(CriticalLambda, Fig3Put) {
  const auto lb = critical_lambda(kFig3, kPut);
  ASSERT_TRUE(lb);
  EXPECT_NEAR(*lb, 0.5094, 1e-3);
  EXPECT_TRUE(solve_boundaries(with_lambda(kFig3, *lb - 1e-4), kPut).heuristic.exists());
  EXPECT_FALSE(solve_boundaries(with_lambda(kFig3, *lb + 1e-4), kPut).heuristic.exists());
}

TEST(CriticalLambda, NoTransitionForEqualRegimes) {
  EXPECT_FALSE(critical_lambda({0.04, 0.5, 0.2, 0.01, 0.2, 0.01}, kPut).has_value());
}

TEST(CriticalLambda, CallMirrorExists) {
  const auto lb = critical_lambda(kFig3, kCall);
  ASSERT_TRUE(lb);
  EXPECT_GT(*lb, 0.0);
  EXPECT_TRUE(solve_boundaries(with_lambda(kFig3, 0.5 * *lb), kCall).heuristic.exists());
  EXPECT_FALSE(solve_boundaries(with_lambda(kFig3, 2.0 * *lb), kCall).heuristic.exists());
}

TEST(BoundaryProperties, RandomisedResidualsAndOrdering) {
  int solved = 0;
  for (const auto& c : testing_support::random_cases(1000, 99)) {
    const auto m = build_price_model(c.params, c.spec);
    for (const auto& r : check_root_residual(c.id, m)) {
      EXPECT_TRUE(r.pass) << c.id << " " << r.measured;
      ++solved;
    }
    for (const auto& r : check_ordering(c.id, m)) EXPECT_TRUE(r.pass) << c.id;
  }
  EXPECT_GT(solved, 500);
}

TEST(BoundaryProperties, Case1HasOneSignChange) {
  int checked = 0;
  for (const auto& c : testing_support::random_cases(400, 5)) {
    const auto e = compute_exponents(c.params, c.spec);
    if (classify_phase(e, c.params, c.spec) != Phase::Case1) continue;
    const double eta0 = solve_case1_root(e, c.spec);
    const bool call = c.spec.kind == OptionKind::Call;
    const double lo = call ? std::min(1e-4, 0.5 * eta0) : 1.0;
    const double hi = call ? 1.0 : std::max(1e4, 2.0 * eta0);
    int changes = 0;
    double prev = g_aux(lo, e);
    for (int i = 1; i <= 4000; ++i) {
      const double x = lo * std::pow(hi / lo, i / 4000.0);
      const double v = g_aux(x, e);
      if ((v > 0) != (prev > 0) && v != 0.0 && prev != 0.0) ++changes;
      prev = v;
    }
    EXPECT_LE(changes, 1) << c.id;
    ++checked;
  }
  EXPECT_GT(checked, 50);
}

TEST(BoundaryProperties, PutHeuristicBelowOptimalInCase1) {
  for (const auto& c : testing_support::random_cases(600, 17)) {
    if (c.spec.kind != OptionKind::Put) continue;
    const auto b = solve_boundaries(c.params, c.spec);
    if (b.phase != Phase::Case1 || !b.heuristic.exists()) continue;
    EXPECT_LE(*b.heuristic.boundary, b.H_a * (1 + 1e-12)) << c.id;
  }
}

TEST(BoundaryProperties, ContinuousAcrossPhaseBorder) {
  for (const auto& spec : {kPut, kCall}) {
    for (double eps : {1e-3, 1e-5, 1e-7}) {
      for (double side : {-1.0, 1.0}) {
        const MarketParams p{0.04, 0.5, 0.25 * (1 + side * eps), 0.01, 0.25, 0.01};
        const auto b = solve_boundaries(p, spec);
        EXPECT_NEAR(b.H_a / b.H_b, 1.0, 50 * eps) << eps << " " << side;
      }
    }
  }
}
