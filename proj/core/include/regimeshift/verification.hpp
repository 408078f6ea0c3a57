#pragma once

#include <string>
#include <vector>

#include "regimeshift/market.hpp"
#include "regimeshift/monte_carlo.hpp"
#include "regimeshift/pricing.hpp"

namespace regimeshift {

struct CheckResult {
  std::string case_id;
  std::string check;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct VerificationReport {
  std::vector<CheckResult> checks;

  bool all_pass() const noexcept;
  std::size_t failures() const noexcept;
  void append(const VerificationReport& other);
  /// JSON array of {case_id, check, measured, tolerance, pass}.
  std::string to_json(int indent = 2) const;
};

struct VerificationCase {
  std::string id;
  MarketParams params;
  OptionSpec spec;
};

struct SuiteOptions {
  /// Multiplies every tolerance; values below 1 tighten the suite (a test hook
  /// for forcing failures).
  double tolerance_scale = 1.0;
  int grid_points = 100;
};

// Individual checks. Each returns one or more CheckResult rows for `id`.
std::vector<CheckResult> check_smooth_pasting(const std::string& id, const PriceModel& m,
                                              const SuiteOptions& opt = {});
std::vector<CheckResult> check_ode_residual(const std::string& id, const PriceModel& m,
                                            const SuiteOptions& opt = {});
std::vector<CheckResult> check_continuity(const std::string& id, const PriceModel& m,
                                          const SuiteOptions& opt = {});
std::vector<CheckResult> check_dominance(const std::string& id, const PriceModel& m,
                                         const SuiteOptions& opt = {});
std::vector<CheckResult> check_monotonicity(const std::string& id, const PriceModel& m,
                                            const SuiteOptions& opt = {});
std::vector<CheckResult> check_maximality(const std::string& id, const PriceModel& m,
                                          const SuiteOptions& opt = {});
std::vector<CheckResult> check_fourth_derivative_jump(const std::string& id, const PriceModel& m,
                                                      const SuiteOptions& opt = {});
std::vector<CheckResult> check_root_residual(const std::string& id, const PriceModel& m,
                                             const SuiteOptions& opt = {});
std::vector<CheckResult> check_ordering(const std::string& id, const PriceModel& m,
                                        const SuiteOptions& opt = {});
/// Ĥ vs H_a and P̂ vs P; enforced for Case1 puts, reported for everything else.
std::vector<CheckResult> check_heuristic_dominance(const std::string& id, const PriceModel& m,
                                                   const SuiteOptions& opt = {});

/// Governing-ODE residual of `branch` at `spot`, divided by (r + λ)·|price|.
double ode_residual(const PriceModel& m, const Branch& branch, bool post_change, double spot);

/// All applicable checks for each case.
VerificationReport run_property_suite(const std::vector<VerificationCase>& cases,
                                      const SuiteOptions& opt = {});

/// Parameter sets of the four figures, a few special phases and their calls.
std::vector<VerificationCase> default_cases();

struct McBenchmark {
  std::string id;
  MarketParams params;
  OptionSpec spec;
  double spot;
};

std::vector<McBenchmark> default_mc_benchmarks();

/// |MC - closed form| <= 3 standard errors (plus the truncation bound) per benchmark.
VerificationReport run_mc_suite(const std::vector<McBenchmark>& benches, const McConfig& cfg,
                                const SuiteOptions& opt = {});

/// Local spot grid used by the grid-based checks: log-spaced on [1e-3 K, 1e3 K].
std::vector<double> spot_grid(double strike, int points);

}  // namespace regimeshift
