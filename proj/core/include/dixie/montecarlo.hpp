#pragma once

// Monte Carlo for the discrete collector, its Poissonized embedding and the
// useful-hit chain. Per-trial outputs are stored and reduced in trial order,
// so results do not depend on the thread count.

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dixie/probability.hpp"

namespace dixie {

struct SimConfig {
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  CollectorModel model;
  unsigned threads = 0;  ///< 0: hardware concurrency
};

struct SampleStats {
  double mean = 0.0;
  double variance = 0.0;  ///< unbiased
  double std_error_mean = 0.0;
  double std_error_variance = 0.0;  ///< from the sample fourth central moment
  std::size_t trials = 0;

  static SampleStats from(std::span<const double> xs);
};

/// Standard error of mean(z) for per-trial influence values z.
double influence_std_error(std::span<const double> z);

/// Draws until every type has m copies; statistics of the draw count T.
SampleStats simulate_discrete(const SimConfig& cfg);

/// X = max_j Gamma(m, rate p_j).
SampleStats simulate_poissonized(const SimConfig& cfg);
/// Per-trial X values (same stream as simulate_poissonized).
std::vector<double> sample_poissonized(const SimConfig& cfg);

/// Var(T) = Var(X) - E X, estimated from Poissonized samples.
struct VarianceFromX {
  double value;
  double std_error;
};
VarianceFromX variance_of_t_from_x(std::span<const double> xs);

struct TransferReport {
  SampleStats discrete;
  SampleStats poissonized;
  VarianceFromX var_t_from_x;
  double exact_mean;
  double exact_var_t;
  double z_mean;        ///< E X sample vs E T sample
  double z_var_from_x;  ///< Var X - E X vs exact Var T
  double z_var_discrete;
  bool within_3sigma;
};
/// Runs both simulators with the same config and compares with exact moments.
TransferReport transfer_check(const SimConfig& cfg);

/// Var T = E sum_l psi(R_l) + Var H, psi(r) = 1/r^2 - 1/r, H = sum_l 1/R_l,
/// where R_l is the active mass before the l-th useful hit.
struct ActiveClockReport {
  SampleStats psi_sum;
  SampleStats hit_time;  ///< H
  double total;          ///< mean psi_sum + sample Var H
  double std_error_total;
  double exact_var_t;
  double z;
  bool within_3sigma;
};
ActiveClockReport simulate_active_clock(const SimConfig& cfg);

/// m = 1 useful-hit chain: mean[r-1] estimates E R_r, the mass of the r
/// still-missing coupons.
struct RemainingMass {
  std::vector<double> mean;
  std::vector<double> std_error;
  std::size_t trials;
};
RemainingMass simulate_remaining_mass(const ProbabilityVector& p, std::size_t trials,
                                      std::uint64_t seed, unsigned threads = 0);

}  // namespace dixie
