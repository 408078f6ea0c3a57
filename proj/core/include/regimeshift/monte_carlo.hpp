#pragma once

#include <cstdint>

#include "regimeshift/boundary.hpp"
#include "regimeshift/market.hpp"

namespace regimeshift {

struct McConfig {
  std::uint64_t paths = 100000;
  double dt = 1.0 / 1000.0;
  double t_max = 200.0;
  std::uint64_t seed = 20240611;
  bool antithetic = true;
  /// 0 picks std::thread::hardware_concurrency().
  unsigned threads = 0;

  friend bool operator==(const McConfig&, const McConfig&) = default;
};

struct McEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t paths_used = 0;
  /// Upper bound on the bias from stopping unexercised paths at t_max.
  double truncation_bound = 0.0;
  /// Fraction of paths still unexercised at t_max.
  double alive_fraction = 0.0;
};

/// Throws DomainError for an invalid config.
void validate(const McConfig& cfg);

/// Discounted payoff of the threshold policy "exercise at the first grid time
/// S is beyond H_a before the change or beyond H_b after it", under the
/// risk-neutral dynamics with an exponential change time.
McEstimate mc_price(const MarketParams& params, const OptionSpec& spec,
                    const BoundarySolution& boundary, double spot, const McConfig& cfg = {});

}  // namespace regimeshift
