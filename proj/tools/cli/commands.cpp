#include "commands.hpp"

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "regimeshift/boundary.hpp"
#include "regimeshift/errors.hpp"
#include "regimeshift/figures.hpp"
#include "regimeshift/monte_carlo.hpp"
#include "regimeshift/pricing.hpp"
#include "regimeshift/verification.hpp"
#include "run_config.hpp"

namespace regimeshift::cli {

namespace {

using Cell = std::variant<std::monostate, double, std::string>;

struct Rows {
  std::vector<std::string> header;
  std::vector<std::vector<Cell>> rows;
};

std::string cell_text(const Cell& c) {
  if (std::holds_alternative<double>(c)) return format_number(std::get<double>(c));
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return "";
}

nlohmann::ordered_json cell_json(const Cell& c) {
  if (std::holds_alternative<double>(c)) {
    const double x = std::get<double>(c);
    if (std::isfinite(x)) return x;
    return format_number(x);
  }
  if (std::holds_alternative<std::string>(c)) return std::get<std::string>(c);
  return nullptr;
}

void write_rows(std::ostream& os, const Rows& r, Format fmt) {
  if (fmt == Format::Csv) {
    for (std::size_t i = 0; i < r.header.size(); ++i) os << (i ? "," : "") << r.header[i];
    os << '\n';
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << cell_text(row[i]);
      os << '\n';
    }
    return;
  }
  auto arr = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json obj = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < row.size(); ++i) obj[r.header[i]] = cell_json(row[i]);
    arr.push_back(std::move(obj));
  }
  os << arr.dump(2) << '\n';
}

Rows from_table(const Table& t) {
  Rows r;
  r.header = t.header;
  for (const auto& row : t.rows) {
    std::vector<Cell> cells;
    for (const auto& v : row) cells.push_back(v ? Cell{*v} : Cell{});
    r.rows.push_back(std::move(cells));
  }
  return r;
}

Cell opt_cell(const std::optional<double>& v) { return v ? Cell{*v} : Cell{}; }

Rows cmd_price(const RunConfig& cfg) {
  const auto m = build_price_model(cfg.market, cfg.option);
  Rows r{{"S", "price", "branch", "phase", "H_a", "H_b"}, {}};
  for (double S : cfg.spots) {
    const double P = price(S, m);
    r.rows.push_back({S, P, std::string(to_string(branch_at(S, m.branches).tag)),
                      std::string(to_string(m.boundary.phase)), m.boundary.H_a, m.boundary.H_b});
  }
  return r;
}

Rows cmd_boundary(const RunConfig& cfg) {
  Rows r{{"lambda", "phase", "H_a", "H_b", "root", "heuristic_H_a", "heuristic_exists",
          "order_parameter", "lambda_bar"},
         {}};
  std::vector<double> lambdas = cfg.lambdas;
  if (lambdas.empty()) lambdas.push_back(cfg.market.lambda);
  // λ̄ depends on everything but λ, so it is solved once.
  std::optional<double> lambda_bar;
  {
    MarketParams p = cfg.market;
    p.lambda = 1e-6;
    const auto e = compute_exponents(p, cfg.option);
    if (classify_phase(e, p, cfg.option) == Phase::Case2) lambda_bar = critical_lambda(cfg.market, cfg.option);
  }
  for (double lam : lambdas) {
    MarketParams p = cfg.market;
    p.lambda = lam;
    const auto e = compute_exponents(p, cfg.option);
    const auto b = solve_boundaries(e, p, cfg.option);
    r.rows.push_back({lam, std::string(to_string(b.phase)), b.H_a, b.H_b, opt_cell(b.root),
                      opt_cell(b.heuristic.boundary),
                      std::string(b.heuristic.exists() ? "true" : "false"), order_parameter(e),
                      opt_cell(lambda_bar)});
  }
  return r;
}

Rows cmd_curve(const RunConfig& cfg) {
  const auto m = build_price_model(cfg.market, cfg.option);
  Rows r{{"S", "moneyness", "payoff", "price", "post_change_price", "heuristic_price", "branch"}, {}};
  for (double S : curve_spots(cfg)) {
    r.rows.push_back({S, S / cfg.option.strike, payoff(S, cfg.option), price(S, m),
                      price_post_change(S, m),
                      m.heuristic.empty() ? Cell{} : Cell{heuristic_price(S, m)},
                      std::string(to_string(branch_at(S, m.branches).tag))});
  }
  return r;
}

Rows cmd_mc(const RunConfig& cfg) {
  const auto m = build_price_model(cfg.market, cfg.option);
  Rows r{{"S", "mc_mean", "std_error", "closed_form", "z_score", "paths", "truncation_bound"}, {}};
  for (double S : cfg.spots) {
    const auto est = mc_price(cfg.market, cfg.option, m.boundary, S, cfg.mc);
    const double exact = price(S, m);
    const Cell z = est.std_error > 0.0 ? Cell{(est.mean - exact) / est.std_error} : Cell{};
    r.rows.push_back({S, est.mean, est.std_error, exact, z, static_cast<double>(est.paths_used),
                      est.truncation_bound});
  }
  return r;
}

struct Overrides {
  std::optional<double> r, lambda, sigma_a, delta_a, sigma_b, delta_b, strike;
  std::optional<std::string> kind;
  std::vector<double> spots;
  std::optional<std::uint64_t> paths;
  std::optional<double> dt, t_max;
  std::optional<unsigned> threads;
};

void add_market_flags(CLI::App& app, Overrides& o) {
  app.add_option("--r", o.r, "risk-free rate (decimal)");
  app.add_option("--lambda", o.lambda, "regime-change intensity per year");
  app.add_option("--sigma-a", o.sigma_a, "volatility before the change");
  app.add_option("--delta-a", o.delta_a, "dividend yield before the change");
  app.add_option("--sigma-b", o.sigma_b, "volatility after the change");
  app.add_option("--delta-b", o.delta_b, "dividend yield after the change");
  app.add_option("--kind", o.kind, "call or put");
  app.add_option("--strike", o.strike, "strike price");
}

void apply(const Overrides& o, RunConfig& cfg) {
  if (o.r) cfg.market.r = *o.r;
  if (o.lambda) cfg.market.lambda = *o.lambda;
  if (o.sigma_a) cfg.market.sigma_a = *o.sigma_a;
  if (o.delta_a) cfg.market.delta_a = *o.delta_a;
  if (o.sigma_b) cfg.market.sigma_b = *o.sigma_b;
  if (o.delta_b) cfg.market.delta_b = *o.delta_b;
  if (o.kind) cfg.option.kind = parse_option_kind(*o.kind);
  if (o.strike) cfg.option.strike = *o.strike;
  if (!o.spots.empty()) cfg.spots = o.spots;
  if (o.paths) cfg.mc.paths = *o.paths;
  if (o.dt) cfg.mc.dt = *o.dt;
  if (o.t_max) cfg.mc.t_max = *o.t_max;
  if (o.threads) cfg.mc.threads = *o.threads;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Perpetual American options under an exponentially-timed regime change"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::string> out_path;
  std::optional<std::string> format;
  std::optional<std::uint64_t> seed;
  std::string write_config;
  Overrides ov;
  app.add_option("--config", config_path, "JSON run configuration")->check(CLI::ExistingFile);
  app.add_option("--out", out_path, "write results here instead of stdout");
  app.add_option("--format", format, "csv or json");
  app.add_option("--seed", seed, "Monte Carlo master seed");
  app.add_option("--write-config", write_config, "write the resolved configuration as JSON");
  add_market_flags(app, ov);
  app.add_option("--spot", ov.spots, "spot price(s) for price and mc");

  auto* price_cmd = app.add_subcommand("price", "price at the configured spots");
  auto* boundary_cmd = app.add_subcommand("boundary", "phase and exercise boundaries");
  auto* curve_cmd = app.add_subcommand("curve", "price on the configured spot grid");
  auto* figure_cmd = app.add_subcommand("figure", "regenerate figure data (1-4)");
  int figure_no = 0;
  figure_cmd->add_option("n", figure_no, "figure number")->required()->check(CLI::Range(1, 4));
  auto* verify_cmd = app.add_subcommand("verify", "property suite and Monte Carlo benchmarks");
  double tolerance_scale = 1.0;
  bool skip_mc = false;
  verify_cmd->add_option("--tolerance-scale", tolerance_scale, "multiply every tolerance");
  verify_cmd->add_flag("--no-mc", skip_mc, "skip the Monte Carlo benchmarks");
  auto* mc_cmd = app.add_subcommand("mc", "Monte Carlo estimate of the optimal policy");
  mc_cmd->add_option("--paths", ov.paths, "number of paths");
  mc_cmd->add_option("--dt", ov.dt, "time step in years");
  mc_cmd->add_option("--t-max", ov.t_max, "truncation horizon in years");
  mc_cmd->add_option("--threads", ov.threads, "worker threads (0 = all cores)");
  for (auto* sub : {price_cmd, boundary_cmd, curve_cmd, figure_cmd, verify_cmd, mc_cmd}) {
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
    apply(ov, cfg);
    if (out_path) cfg.out = *out_path;
    if (format) cfg.format = parse_format(*format);
    if (seed) cfg.mc.seed = *seed;
    validate(cfg);

    if (!write_config.empty()) {
      std::ofstream f(write_config);
      if (!f) throw DomainError("cannot write config to '" + write_config + "'");
      f << to_json(cfg);
    }

    std::ofstream file;
    if (!cfg.out.empty()) {
      file.open(cfg.out);
      if (!file) throw DomainError("cannot open output file '" + cfg.out + "'");
    }
    std::ostream& os = cfg.out.empty() ? out : file;

    if (verify_cmd->parsed()) {
      SuiteOptions opt;
      opt.tolerance_scale = tolerance_scale;
      auto report = run_property_suite(default_cases(), opt);
      if (!skip_mc) report.append(run_mc_suite(default_mc_benchmarks(), cfg.mc, opt));
      os << report.to_json() << '\n';
      if (!report.all_pass()) {
        err << report.failures() << " of " << report.checks.size() << " checks failed\n";
        return kExitVerifyFailed;
      }
      return kExitOk;
    }

    Rows rows;
    if (price_cmd->parsed()) rows = cmd_price(cfg);
    if (boundary_cmd->parsed()) rows = cmd_boundary(cfg);
    if (curve_cmd->parsed()) rows = cmd_curve(cfg);
    if (figure_cmd->parsed()) rows = from_table(figure(figure_no));
    if (mc_cmd->parsed()) rows = cmd_mc(cfg);
    write_rows(os, rows, cfg.format);
    return kExitOk;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const UnsupportedError& e) {
    err << "error: " << e.what() << '\n';
    return kExitDomainError;
  } catch (const SolverError& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitDomainError;
  }
}

}  // namespace regimeshift::cli
