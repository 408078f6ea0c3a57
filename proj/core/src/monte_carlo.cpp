#include "regimeshift/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>
#include <vector>

#include "regimeshift/errors.hpp"

namespace regimeshift {

namespace {

constexpr std::uint64_t kBatchPaths = 1024;
// A skipped stretch is only taken when the boundary is this many standard
// deviations beyond the drifted endpoint, so no grid crossing can be missed
// with any practical probability.
constexpr double kSafetySigmas = 8.0;

struct Regime {
  double drift;  // of ln S per year
  double sigma;
  double log_boundary;  // ±inf when never exercised
};

struct Path {
  double x = 0.0;
  bool alive = true;
  double value = 0.0;
};

struct BatchResult {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t alive = 0;
  double alive_spot = 0.0;
};

class Simulator {
 public:
  Simulator(const MarketParams& p, const OptionSpec& spec, const BoundarySolution& b, double spot,
            const McConfig& cfg)
      : p_(p), spec_(spec), s_(kind_sign(spec.kind)), x0_(std::log(spot)), cfg_(cfg) {
    const auto log_b = [&](double H) {
      if (std::isinf(H)) return s_ * INFINITY;
      return std::log(H);
    };
    a_ = {p.r - p.delta_a - 0.5 * p.sigma_a * p.sigma_a, p.sigma_a, log_b(b.H_a)};
    b_ = {p.r - p.delta_b - 0.5 * p.sigma_b * p.sigma_b, p.sigma_b, log_b(b.H_b)};
    // After a change into δ_b = 0 the call is worth S, a martingale once discounted.
    close_at_change_ = spec.kind == OptionKind::Call && std::isinf(b.H_b);
    n_steps_ = static_cast<std::uint64_t>(std::llround(cfg.t_max / cfg.dt));
  }

  void run_pair(std::mt19937_64& rng, bool antithetic, BatchResult& out) const {
    std::normal_distribution<double> normal;
    double tau = INFINITY;
    if (p_.lambda > 0.0) tau = std::exponential_distribution<double>(p_.lambda)(rng);

    Path paths[2];
    const int n = antithetic ? 2 : 1;
    for (int i = 0; i < n; ++i) {
      paths[i].x = x0_;
      check(paths[i], a_, 0.0);
    }
    bool changed = false;
    std::uint64_t k = 0;
    const auto any_alive = [&] { return paths[0].alive || (n == 2 && paths[1].alive); };

    while (k < n_steps_ && any_alive()) {
      const Regime& reg = changed ? b_ : a_;
      const std::uint64_t tau_step =
          changed ? n_steps_ : static_cast<std::uint64_t>(std::min(tau / cfg_.dt, 1e18));
      if (!changed && k == tau_step) {
        // The step (k·dt, (k+1)·dt] contains τ: split it there.
        const double t0 = k * cfg_.dt;
        const double h1 = tau - t0;
        const double h2 = cfg_.dt - h1;
        const double z1 = normal(rng);
        const double z2 = normal(rng);
        for (int i = 0; i < n; ++i) {
          const double sgn = i == 0 ? 1.0 : -1.0;
          Path& path = paths[i];
          if (!path.alive) continue;
          path.x += a_.drift * h1 + a_.sigma * std::sqrt(h1) * sgn * z1;
          if (close_at_change_) {
            path.value = std::exp(-p_.r * tau + path.x);
            path.alive = false;
            continue;
          }
          check(path, b_, tau);
          if (!path.alive) continue;
          path.x += b_.drift * h2 + b_.sigma * std::sqrt(h2) * sgn * z2;
          check(path, b_, (k + 1) * cfg_.dt);
        }
        changed = true;
        ++k;
        continue;
      }

      std::uint64_t m = std::min(n_steps_, tau_step) - k;
      for (int i = 0; i < n; ++i) {
        if (paths[i].alive) m = std::min(m, safe_steps(paths[i].x, reg));
      }
      m = std::max<std::uint64_t>(m, 1);
      const double h = m * cfg_.dt;
      const double z = normal(rng);
      const double sd = reg.sigma * std::sqrt(h);
      k += m;
      for (int i = 0; i < n; ++i) {
        Path& path = paths[i];
        if (!path.alive) continue;
        path.x += reg.drift * h + sd * (i == 0 ? z : -z);
        check(path, reg, k * cfg_.dt);
      }
    }

    const double disc_end = std::exp(-p_.r * n_steps_ * cfg_.dt);
    double sample = 0.0;
    for (int i = 0; i < n; ++i) {
      Path& path = paths[i];
      if (path.alive) {
        const double S = std::exp(path.x);
        path.value = disc_end * payoff(S, spec_);
        ++out.alive;
        out.alive_spot += disc_end * S;
      }
      sample += path.value;
    }
    sample /= n;
    out.sum += sample;
    out.sum_sq += sample * sample;
    ++out.samples;
  }

 private:
  void check(Path& path, const Regime& reg, double t) const {
    if (s_ * (path.x - reg.log_boundary) >= 0.0) {
      path.value = std::exp(-p_.r * t) * payoff(std::exp(path.x), spec_);
      path.alive = false;
    }
  }

  std::uint64_t safe_steps(double x, const Regime& reg) const {
    if (std::isinf(reg.log_boundary)) return n_steps_;
    const double d = s_ * (reg.log_boundary - x);
    const double adverse = std::max(0.0, s_ * reg.drift);
    const double b = kSafetySigmas * reg.sigma;
    double root_t;
    if (adverse > 0.0) {
      root_t = (-b + std::sqrt(b * b + 4.0 * adverse * d)) / (2.0 * adverse);
    } else {
      root_t = d / b;
    }
    const double steps = root_t * root_t / cfg_.dt;
    if (!(steps >= 1.0)) return 1;
    return static_cast<std::uint64_t>(std::min(steps, 1e15));
  }

  MarketParams p_;
  OptionSpec spec_;
  double s_;
  double x0_;
  McConfig cfg_;
  Regime a_{};
  Regime b_{};
  bool close_at_change_ = false;
  std::uint64_t n_steps_ = 0;
};

}  // namespace

void validate(const McConfig& cfg) {
  if (cfg.paths < 1) throw DomainError("paths must be >= 1");
  if (!(cfg.dt > 0.0) || cfg.dt > 1.0 / 252.0) throw DomainError("dt must lie in (0, 1/252]");
  if (!(cfg.t_max > 0.0) || !std::isfinite(cfg.t_max)) throw DomainError("t_max must be positive");
}

McEstimate mc_price(const MarketParams& params, const OptionSpec& spec,
                    const BoundarySolution& boundary, double spot, const McConfig& cfg) {
  validate(params);
  validate(spec);
  validate(cfg);
  if (!std::isfinite(spot) || !(spot > 0.0)) throw DomainError("spot must be finite and positive");

  McEstimate est;
  if (boundary.phase == Phase::NeverExercise) {
    est.mean = spot;
    est.paths_used = cfg.paths;
    return est;
  }
  if (!on_live_side(spot, boundary.H_a, spec.kind)) {
    est.mean = payoff(spot, spec);
    est.paths_used = cfg.paths;
    return est;
  }

  const Simulator sim(params, spec, boundary, spot, cfg);
  const std::uint64_t per_sample = cfg.antithetic ? 2 : 1;
  const std::uint64_t samples = (cfg.paths + per_sample - 1) / per_sample;
  const std::uint64_t per_batch = kBatchPaths / per_sample;
  const std::uint64_t batches = (samples + per_batch - 1) / per_batch;
  std::vector<BatchResult> results(batches);

  auto work = [&](std::uint64_t first, std::uint64_t stride) {
    for (std::uint64_t bi = first; bi < batches; bi += stride) {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                        static_cast<std::uint32_t>(bi), static_cast<std::uint32_t>(bi >> 32)};
      std::mt19937_64 rng(seq);
      const std::uint64_t count = std::min(per_batch, samples - bi * per_batch);
      for (std::uint64_t i = 0; i < count; ++i) sim.run_pair(rng, cfg.antithetic, results[bi]);
    }
  };

  unsigned n_threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  n_threads = static_cast<unsigned>(std::min<std::uint64_t>(n_threads, batches));
  if (n_threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(work, t, n_threads);
    for (auto& th : pool) th.join();
  }

  // Reduce in batch order so the result does not depend on the thread count.
  BatchResult total;
  for (const auto& r : results) {
    total.sum += r.sum;
    total.sum_sq += r.sum_sq;
    total.samples += r.samples;
    total.alive += r.alive;
    total.alive_spot += r.alive_spot;
  }
  const double n = static_cast<double>(total.samples);
  est.mean = total.sum / n;
  const double var = n > 1 ? std::max(0.0, (total.sum_sq - n * est.mean * est.mean) / (n - 1)) : 0.0;
  est.std_error = std::sqrt(var / n);
  est.paths_used = total.samples * per_sample;
  const double paths_used = static_cast<double>(est.paths_used);
  est.alive_fraction = total.alive / paths_used;
  if (spec.kind == OptionKind::Put) {
    est.truncation_bound = std::exp(-params.r * cfg.t_max) * spec.strike * est.alive_fraction;
  } else {
    est.truncation_bound = total.alive_spot / paths_used;
  }
  return est;
}

}  // namespace regimeshift
