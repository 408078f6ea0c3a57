#pragma once

#include <string>
#include <vector>

#include "regimeshift/market.hpp"
#include "regimeshift/monte_carlo.hpp"

namespace regimeshift::cli {

enum class Format { Csv, Json };

struct SpotGrid {
  double lo = 0.2;  ///< multiple of the strike
  double hi = 3.0;
  int points = 200;

  friend bool operator==(const SpotGrid&, const SpotGrid&) = default;
};

struct RunConfig {
  MarketParams market;
  OptionSpec option;
  std::vector<double> spots{1.0};
  SpotGrid curve;
  std::vector<double> lambdas;  ///< boundary sweep; empty means market.lambda only
  McConfig mc;
  std::string out;
  Format format = Format::Csv;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Throws DomainError on any invalid field.
void validate(const RunConfig& cfg);

std::string to_json(const RunConfig& cfg);
/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig from_json(const std::string& text);
RunConfig load_config(const std::string& path);

Format parse_format(const std::string& text);
std::string to_string(Format f);

/// Spot points of the curve grid, in price units.
std::vector<double> curve_spots(const RunConfig& cfg);

}  // namespace regimeshift::cli
