#include "regimeshift/figures.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "regimeshift/errors.hpp"
#include "regimeshift/exponents.hpp"
#include "regimeshift/pricing.hpp"

namespace regimeshift {

namespace {

constexpr double kR = 0.04;
const OptionSpec kCall{OptionKind::Call, 1.0};
const OptionSpec kPut{OptionKind::Put, 1.0};

std::string label(double x) { return format_number(x); }

}  // namespace

std::string format_number(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (std::isnan(x)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      if (row[i]) os << format_number(*row[i]);
    }
    os << '\n';
  }
}

std::string Table::to_csv() const {
  std::ostringstream os;
  write_csv(os);
  return os.str();
}

std::vector<double> default_moneyness_grid() {
  constexpr int n = 200;
  const double a = std::log(0.2);
  const double b = std::log(3.0);
  std::vector<double> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(std::exp(a + (b - a) * i / (n - 1)));
  return out;
}

Table figure1() {
  const double deltas[] = {0.0, 0.005, 0.01, 0.02};
  Table t;
  t.header = {"moneyness", "payoff"};
  std::vector<PriceModel> models;
  for (double da : deltas) {
    t.header.push_back("price_delta_a_" + label(da));
    models.push_back(build_price_model({kR, 0.5, 0.10, da, 0.10, 0.025}, kCall));
  }
  for (double S : default_moneyness_grid()) {
    std::vector<std::optional<double>> row{S, payoff(S, kCall)};
    for (const auto& m : models) row.push_back(price(S, m));
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table figure2() {
  const double inv_lambdas[] = {0.5, 1.0, 2.0, 5.0};
  Table t;
  t.header = {"moneyness"};
  std::vector<PriceModel> models;
  for (double inv : inv_lambdas) {
    t.header.push_back("rel_gap_inv_lambda_" + label(inv));
    models.push_back(build_price_model({kR, 1.0 / inv, 0.10, 0.0, 0.25, 0.0}, kPut));
  }
  for (double S : default_moneyness_grid()) {
    std::vector<std::optional<double>> row{S};
    for (const auto& m : models) {
      if (m.heuristic.empty()) {
        row.emplace_back();
        continue;
      }
      const double P = price(S, m);
      row.push_back((P - heuristic_price(S, m)) / P);
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table figure3() {
  const double lambdas[] = {0.1, 0.3, 0.5, 0.6, 1.0};
  Table t;
  t.header = {"moneyness", "payoff"};
  std::vector<PriceModel> models;
  for (double lam : lambdas) {
    t.header.push_back("exact_lambda_" + label(lam));
    t.header.push_back("heuristic_lambda_" + label(lam));
    models.push_back(build_price_model({kR, lam, 0.40, 0.0175, 0.25, 0.0175}, kPut));
  }
  for (double S : default_moneyness_grid()) {
    std::vector<std::optional<double>> row{S, payoff(S, kPut)};
    for (const auto& m : models) {
      row.push_back(price(S, m));
      if (m.heuristic.empty()) {
        row.emplace_back();
      } else {
        row.push_back(heuristic_price(S, m));
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table figure4() {
  const double lambdas[] = {0.1, 0.5, 1.0, 2.0};
  constexpr int n = 200;
  Table t;
  t.header = {"sigma_a", "order_parameter"};
  for (double lam : lambdas) t.header.push_back("gap_lambda_" + label(lam));
  for (int i = 0; i < n; ++i) {
    const double sa = 0.10 + 0.40 * i / (n - 1);
    std::vector<std::optional<double>> row{sa};
    bool first = true;
    for (double lam : lambdas) {
      const MarketParams p{kR, lam, sa, 0.0, 0.25, 0.0};
      const auto m = build_price_model(p, kPut);
      if (first) {
        row.push_back(order_parameter(m.exps));
        first = false;
      }
      const auto& h = m.boundary.heuristic;
      if (h.exists()) {
        row.push_back((m.boundary.H_a - *h.boundary) / kPut.strike);
      } else {
        row.emplace_back();
      }
    }
    t.rows.push_back(std::move(row));
  }
  return t;
}

Table figure(int n) {
  switch (n) {
    case 1: return figure1();
    case 2: return figure2();
    case 3: return figure3();
    case 4: return figure4();
    default: break;
  }
  throw DomainError("figure number must be 1, 2, 3 or 4");
}

}  // namespace regimeshift
