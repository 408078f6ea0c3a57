#include <gtest/gtest.h>

#include <cmath>

#include "regimeshift/errors.hpp"
#include "regimeshift/monte_carlo.hpp"
#include "regimeshift/pricing.hpp"

using namespace regimeshift;

namespace {

const OptionSpec kPut{OptionKind::Put, 1.0};
const OptionSpec kCall{OptionKind::Call, 1.0};
const MarketParams kFig3{0.04, 0.4, 0.40, 0.0175, 0.25, 0.0175};

McConfig small(std::uint64_t paths = 20000, std::uint64_t seed = 5) {
  McConfig c;
  c.paths = paths;
  c.seed = seed;
  return c;
}

void expect_concordant(const MarketParams& p, const OptionSpec& spec, double S, const McConfig& cfg) {
  const auto m = build_price_model(p, spec);
  const auto est = mc_price(p, spec, m.boundary, S, cfg);
  const double exact = price(S, m);
  EXPECT_LE(std::abs(est.mean - exact), 3 * est.std_error + est.truncation_bound)
      << "mc " << est.mean << " exact " << exact << " se " << est.std_error;
}

}  // namespace

TEST(MonteCarlo, SingleRegimePut) {
  expect_concordant({0.04, 0.0, 0.25, 0.01, 0.10, 0.0}, kPut, 1.0, small(40000));
}

TEST(MonteCarlo, Fig3Put) { expect_concordant(kFig3, kPut, 1.0, small(40000)); }

TEST(MonteCarlo, Fig2Case1Put) {
  expect_concordant({0.04, 0.5, 0.10, 0.0, 0.25, 0.0}, kPut, 1.0, small(40000));
}

TEST(MonteCarlo, DividendStopCall) {
  expect_concordant({0.04, 0.5, 0.10, 0.02, 0.10, 0.0}, kCall, 1.0, small(20000));
}

TEST(MonteCarlo, ImmediateExercise) {
  const auto m = build_price_model(kFig3, kPut);
  const double S = 0.5 * m.boundary.H_a;
  const auto est = mc_price(kFig3, kPut, m.boundary, S, small(1000));
  EXPECT_EQ(est.mean, 1.0 - S);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, NeverExerciseIsTheUnderlying) {
  const MarketParams p{0.04, 0.5, 0.2, 0.0, 0.3, 0.0};
  const auto b = solve_boundaries(p, kCall);
  const auto est = mc_price(p, kCall, b, 1.7, small(10));
  EXPECT_EQ(est.mean, 1.7);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(MonteCarlo, DeterministicAcrossThreadCounts) {
  const auto b = solve_boundaries(kFig3, kPut);
  auto cfg = small(8192, 42);
  cfg.threads = 1;
  const auto one = mc_price(kFig3, kPut, b, 1.0, cfg);
  const auto again = mc_price(kFig3, kPut, b, 1.0, cfg);
  cfg.threads = 3;
  const auto three = mc_price(kFig3, kPut, b, 1.0, cfg);
  EXPECT_EQ(one.mean, again.mean);
  EXPECT_EQ(one.std_error, again.std_error);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.std_error, three.std_error);
  cfg.seed = 43;
  EXPECT_NE(mc_price(kFig3, kPut, b, 1.0, cfg).mean, one.mean);
}

TEST(MonteCarlo, AntitheticReducesError) {
  const auto b = solve_boundaries(kFig3, kPut);
  auto cfg = small(20000, 9);
  const auto anti = mc_price(kFig3, kPut, b, 1.0, cfg);
  cfg.antithetic = false;
  const auto plain = mc_price(kFig3, kPut, b, 1.0, cfg);
  EXPECT_EQ(anti.paths_used, plain.paths_used);
  EXPECT_LE(anti.std_error, plain.std_error);
}

// The two runs draw different paths, so the comparison uses their combined error.
TEST(MonteCarlo, RefinementStaysWithinCombinedError) {
  const auto m = build_price_model(kFig3, kPut);
  auto cfg = small(40000, 77);
  const auto coarse = mc_price(kFig3, kPut, m.boundary, 1.0, cfg);
  cfg.dt /= 2;
  cfg.t_max *= 2;
  const auto fine = mc_price(kFig3, kPut, m.boundary, 1.0, cfg);
  const double combined = std::hypot(coarse.std_error, fine.std_error);
  EXPECT_LE(std::abs(fine.mean - coarse.mean), 3 * combined);
  EXPECT_LE(std::abs(fine.mean - price(1.0, m)), 3 * fine.std_error + fine.truncation_bound);
  EXPECT_LE(fine.truncation_bound, coarse.truncation_bound);
}

TEST(MonteCarlo, RejectsBadConfig) {
  const auto b = solve_boundaries(kFig3, kPut);
  auto cfg = small();
  cfg.dt = 1.0 / 100;
  EXPECT_THROW(mc_price(kFig3, kPut, b, 1.0, cfg), DomainError);
  cfg = small();
  cfg.paths = 0;
  EXPECT_THROW(mc_price(kFig3, kPut, b, 1.0, cfg), DomainError);
  EXPECT_THROW(mc_price(kFig3, kPut, b, -1.0, small()), DomainError);
}
