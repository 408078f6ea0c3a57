#include "regimeshift/market.hpp"

#include <cmath>
#include <string>

#include "regimeshift/errors.hpp"

namespace regimeshift {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

}  // namespace

void validate(const MarketParams& p) {
  require(std::isfinite(p.r) && p.r > 0.0, "r must be finite and > 0");
  require(std::isfinite(p.lambda) && p.lambda >= 0.0, "lambda must be finite and >= 0");
  require(std::isfinite(p.sigma_a) && p.sigma_a > 0.0, "sigma_a must be finite and > 0");
  require(std::isfinite(p.sigma_b) && p.sigma_b > 0.0, "sigma_b must be finite and > 0");
  require(std::isfinite(p.delta_a) && p.delta_a >= 0.0, "delta_a must be finite and >= 0");
  require(std::isfinite(p.delta_b) && p.delta_b >= 0.0, "delta_b must be finite and >= 0");
}

void validate(const OptionSpec& spec) {
  require(std::isfinite(spec.strike) && spec.strike > 0.0, "strike must be finite and > 0");
}

double payoff(double spot, const OptionSpec& spec) noexcept {
  const double v = kind_sign(spec.kind) * (spot - spec.strike);
  return v > 0.0 ? v : 0.0;
}

bool on_live_side(double spot, double boundary, OptionKind kind) noexcept {
  return kind == OptionKind::Call ? spot < boundary : spot > boundary;
}

std::string_view to_string(OptionKind kind) noexcept {
  return kind == OptionKind::Call ? "call" : "put";
}

OptionKind parse_option_kind(std::string_view text) {
  if (text == "call" || text == "Call" || text == "CALL") return OptionKind::Call;
  if (text == "put" || text == "Put" || text == "PUT") return OptionKind::Put;
  throw DomainError("unknown option kind '" + std::string(text) + "' (expected call or put)");
}

}  // namespace regimeshift
