#include "dixie/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <thread>
#include <tuple>
#include <utility>

#include "dixie/errors.hpp"
#include "dixie/exact_moments.hpp"
#include "dixie/rng.hpp"

namespace dixie {
namespace {

constexpr std::size_t kAliasThreshold = 16;

unsigned worker_count(unsigned requested, std::size_t trials) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(trials, 1)));
}

// out[i] = fn(engine for trial i). Trials are split into contiguous blocks.
template <class T, class Fn>
std::vector<T> run_trials(std::size_t trials, std::uint64_t seed, unsigned threads, Fn fn) {
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  std::vector<T> out(trials);
  const unsigned workers = worker_count(threads, trials);
  auto block = [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      Engine engine = trial_engine(seed, i);
      out[i] = fn(engine);
    }
  };
  if (workers == 1) {
    block(0, trials);
    return out;
  }
  std::vector<std::jthread> pool;
  const std::size_t chunk = (trials + workers - 1) / workers;
  for (std::size_t lo = 0; lo < trials; lo += chunk) {
    pool.emplace_back(block, lo, std::min(trials, lo + chunk));
  }
  return out;
}

// Categorical sampler: linear scan for short vectors, alias table otherwise.
class CouponSampler {
 public:
  explicit CouponSampler(const ProbabilityVector& p) : cdf_(p.size()) {
    std::partial_sum(p.values().begin(), p.values().end(), cdf_.begin());
    cdf_.back() = 1.0;
    if (p.size() > kAliasThreshold) alias_.emplace(p.values());
  }

  std::size_t operator()(Engine& engine) const {
    if (alias_) return (*alias_)(engine);
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    std::size_t i = 0;
    while (u >= cdf_[i]) ++i;
    return i;
  }

 private:
  std::vector<double> cdf_;
  std::optional<AliasTable> alias_;
};

// Picks an active coupon with probability p_i / R.
std::size_t pick_active(Engine& engine, const ProbabilityVector& p,
                        const std::vector<int>& remaining, double active_mass) {
  const double u = std::uniform_real_distribution<double>(0.0, active_mass)(engine);
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (remaining[i] == 0) continue;
    last = i;
    acc += p[i];
    if (u < acc) return i;
  }
  return last;
}

double active_mass(const ProbabilityVector& p, const std::vector<int>& remaining) {
  std::vector<double> active;
  active.reserve(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (remaining[i] > 0) active.push_back(p[i]);
  }
  return compensated_sum(active);
}

double z_score(double diff, double se, double scale) {
  // A floor keeps deterministic (zero-variance) cases meaningful.
  const double denom = std::max(se, 1e-12 * std::max(1.0, std::abs(scale)));
  return diff / denom;
}

}  // namespace

SampleStats SampleStats::from(std::span<const double> xs) {
  SampleStats s;
  s.trials = xs.size();
  if (xs.empty()) return s;
  const double n = static_cast<double>(xs.size());
  s.mean = compensated_sum(xs) / n;
  if (xs.size() < 2) return s;
  double m2 = 0.0, m4 = 0.0;
  for (double x : xs) {
    const double d = (x - s.mean) * (x - s.mean);
    m2 += d;
    m4 += d * d;
  }
  s.variance = m2 / (n - 1.0);
  s.std_error_mean = std::sqrt(s.variance / n);
  m4 /= n;
  const double var_of_var = (m4 - s.variance * s.variance * (n - 3.0) / (n - 1.0)) / n;
  s.std_error_variance = std::sqrt(std::max(0.0, var_of_var));
  return s;
}

double influence_std_error(std::span<const double> z) {
  return SampleStats::from(z).std_error_mean;
}

SampleStats simulate_discrete(const SimConfig& cfg) {
  const auto& p = cfg.model.p;
  const int m = cfg.model.m.value();
  const CouponSampler sampler(p);
  const auto draws = run_trials<double>(cfg.trials, cfg.seed, cfg.threads, [&](Engine& engine) {
    std::vector<int> count(p.size(), 0);
    std::size_t short_types = p.size();
    std::uint64_t t = 0;
    while (short_types > 0) {
      ++t;
      if (++count[sampler(engine)] == m) --short_types;
    }
    return static_cast<double>(t);
  });
  return SampleStats::from(draws);
}

std::vector<double> sample_poissonized(const SimConfig& cfg) {
  const auto& p = cfg.model.p;
  const int m = cfg.model.m.value();
  return run_trials<double>(cfg.trials, cfg.seed, cfg.threads, [&](Engine& engine) {
    double x = 0.0;
    for (double pj : p.values()) x = std::max(x, erlang_draw(engine, m) / pj);
    return x;
  });
}

SampleStats simulate_poissonized(const SimConfig& cfg) {
  return SampleStats::from(sample_poissonized(cfg));
}

VarianceFromX variance_of_t_from_x(std::span<const double> xs) {
  const auto s = SampleStats::from(xs);
  std::vector<double> z(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double d = xs[i] - s.mean;
    z[i] = d * d - d;
  }
  return {s.variance - s.mean, influence_std_error(z)};
}

TransferReport transfer_check(const SimConfig& cfg) {
  TransferReport r{};
  const auto xs = sample_poissonized(cfg);
  r.poissonized = SampleStats::from(xs);
  r.var_t_from_x = variance_of_t_from_x(xs);
  r.discrete = simulate_discrete(cfg);
  const auto exact = mean_variance(cfg.model);
  r.exact_mean = exact.mean;
  r.exact_var_t = exact.var_T;
  r.z_mean = z_score(r.poissonized.mean - r.discrete.mean,
                     std::hypot(r.poissonized.std_error_mean, r.discrete.std_error_mean),
                     exact.mean);
  r.z_var_from_x =
      z_score(r.var_t_from_x.value - exact.var_T, r.var_t_from_x.std_error, exact.var_T);
  r.z_var_discrete =
      z_score(r.discrete.variance - exact.var_T, r.discrete.std_error_variance, exact.var_T);
  r.within_3sigma = std::abs(r.z_mean) <= 3.0 && std::abs(r.z_var_from_x) <= 3.0 &&
                    std::abs(r.z_var_discrete) <= 3.0;
  return r;
}

ActiveClockReport simulate_active_clock(const SimConfig& cfg) {
  const auto& p = cfg.model.p;
  const int m = cfg.model.m.value();
  const std::size_t hits = p.size() * static_cast<std::size_t>(m);
  const auto paths = run_trials<std::pair<double, double>>(
      cfg.trials, cfg.seed, cfg.threads, [&](Engine& engine) {
        std::vector<int> remaining(p.size(), m);
        double mass = 1.0;
        double psi = 0.0, h = 0.0;
        for (std::size_t l = 0; l < hits; ++l) {
          const double inv = 1.0 / mass;
          psi += inv * inv - inv;
          h += inv;
          const std::size_t i = pick_active(engine, p, remaining, mass);
          if (--remaining[i] == 0) mass = active_mass(p, remaining);
        }
        return std::pair{psi, h};
      });
  std::vector<double> psi(paths.size()), h(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) std::tie(psi[i], h[i]) = paths[i];

  ActiveClockReport r{};
  r.psi_sum = SampleStats::from(psi);
  r.hit_time = SampleStats::from(h);
  r.total = r.psi_sum.mean + r.hit_time.variance;
  std::vector<double> z(paths.size());
  for (std::size_t i = 0; i < paths.size(); ++i) {
    const double d = h[i] - r.hit_time.mean;
    z[i] = psi[i] + d * d;
  }
  r.std_error_total = influence_std_error(z);
  r.exact_var_t = mean_variance(cfg.model).var_T;
  r.z = z_score(r.total - r.exact_var_t, r.std_error_total, r.exact_var_t);
  r.within_3sigma = std::abs(r.z) <= 3.0;
  return r;
}

RemainingMass simulate_remaining_mass(const ProbabilityVector& p, std::size_t trials,
                                      std::uint64_t seed, unsigned threads) {
  const std::size_t n = p.size();
  const auto paths =
      run_trials<std::vector<double>>(trials, seed, threads, [&](Engine& engine) {
        std::vector<int> remaining(n, 1);
        std::vector<double> masses(n);
        double mass = 1.0;
        for (std::size_t r = n; r >= 1; --r) {
          masses[r - 1] = mass;
          const std::size_t i = pick_active(engine, p, remaining, mass);
          remaining[i] = 0;
          mass = active_mass(p, remaining);
        }
        return masses;
      });
  RemainingMass out{std::vector<double>(n), std::vector<double>(n), trials};
  std::vector<double> column(trials);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t t = 0; t < trials; ++t) column[t] = paths[t][r];
    const auto s = SampleStats::from(column);
    out.mean[r] = s.mean;
    out.std_error[r] = s.std_error_mean;
  }
  return out;
}

}  // namespace dixie
