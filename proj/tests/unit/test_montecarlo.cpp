#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "dixie/exact_moments.hpp"
#include "dixie/montecarlo.hpp"
#include "dixie/rng.hpp"
#include "doctest.h"

using dixie::CollectorModel;
using dixie::ProbabilityVector;
using dixie::Shape;
using dixie::SimConfig;
using doctest::Approx;

namespace {

SimConfig config(int m, std::vector<double> p, std::size_t trials, std::uint64_t seed = 0,
                 unsigned threads = 1) {
  return {trials, seed, {Shape(m), ProbabilityVector(std::move(p))}, threads};
}

bool within(double value, double target, double se, double k = 3.0) {
  return std::abs(value - target) <= k * se + 1e-12;
}

}  // namespace

TEST_CASE("Philox4x32-10 known answers") {
  using A = std::array<std::uint32_t, 4>;
  CHECK(dixie::philox4x32({0, 0, 0, 0}, {0, 0}) == A{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(dixie::philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff},
                          {0xffffffff, 0xffffffff}) ==
        A{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(dixie::philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344},
                          {0xa4093822, 0x299f31d0}) ==
        A{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("trial engines are keyed by seed and trial") {
  auto a = dixie::trial_engine(0, 5), b = dixie::trial_engine(0, 5);
  auto c = dixie::trial_engine(0, 6), d = dixie::trial_engine(1, 5);
  const auto va = a();
  CHECK(va == b());
  CHECK(va != c());
  CHECK(va != d());
}

TEST_CASE("alias table reproduces its weights") {
  const std::vector<double> w{0.5, 0.2, 0.15, 0.1, 0.05};
  const dixie::AliasTable table(w);
  auto engine = dixie::trial_engine(3, 0);
  std::vector<double> freq(w.size(), 0.0);
  const int draws = 400000;
  for (int i = 0; i < draws; ++i) freq[table(engine)] += 1.0 / draws;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double se = std::sqrt(w[i] * (1 - w[i]) / draws);
    CHECK(within(freq[i], w[i], se, 4.0));
  }
}

TEST_CASE("degenerate discrete laws") {
  const auto one = dixie::simulate_discrete(config(1, {1.0}, 100));
  CHECK(one.mean == 1.0);
  CHECK(one.variance == 0.0);
  const auto three = dixie::simulate_discrete(config(3, {1.0}, 100));
  CHECK(three.mean == 3.0);
  CHECK(three.variance == 0.0);
}

TEST_CASE("two fair coupons: discrete and Poissonized") {
  const auto t = dixie::simulate_discrete(config(1, {0.5, 0.5}, 1000000));
  CHECK(within(t.mean, 3.0, t.std_error_mean));
  CHECK(within(t.variance, 2.0, t.std_error_variance));
  const auto x = dixie::simulate_poissonized(config(1, {0.5, 0.5}, 200000));
  CHECK(within(x.mean, 3.0, x.std_error_mean));
  CHECK(within(x.variance, 5.0, x.std_error_variance));
  const auto e = dixie::simulate_poissonized(config(1, {1.0}, 200000));
  CHECK(within(e.mean, 1.0, e.std_error_mean));
  CHECK(within(e.variance, 1.0, e.std_error_variance));
}

TEST_CASE("results do not depend on the thread count") {
  auto cfg = config(2, {0.5, 0.3, 0.2}, 5000, 42, 1);
  const auto x1 = dixie::sample_poissonized(cfg);
  const auto d1 = dixie::simulate_discrete(cfg);
  cfg.threads = 3;
  const auto x3 = dixie::sample_poissonized(cfg);
  const auto d3 = dixie::simulate_discrete(cfg);
  CHECK(x1 == x3);
  CHECK(d1.mean == d3.mean);
  CHECK(d1.variance == d3.variance);
}

TEST_CASE("alias sampling path for N > 16") {
  SimConfig cfg{100000, 1, {Shape(1), ProbabilityVector::power_law(20, 1.0)}, 1};
  const auto t = dixie::simulate_discrete(cfg);
  const auto exact = dixie::mean_variance(cfg.model);
  CHECK(within(t.mean, exact.mean, t.std_error_mean));
  CHECK(within(t.variance, exact.var_T, t.std_error_variance));
}

TEST_CASE("transfer identity on a nonuniform model") {
  const auto r = dixie::transfer_check(config(2, {0.5, 0.3, 0.2}, 100000));
  CHECK(r.within_3sigma);
  CHECK(r.exact_var_t > 0.0);
}

TEST_CASE("active clock: deterministic cases") {
  const auto two = dixie::simulate_active_clock(config(1, {0.5, 0.5}, 1000));
  CHECK(two.psi_sum.mean == 2.0);
  CHECK(two.psi_sum.variance == 0.0);
  CHECK(two.hit_time.mean == 3.0);
  CHECK(two.hit_time.variance == 0.0);
  CHECK(two.total == Approx(2.0).epsilon(1e-13));
  CHECK(two.within_3sigma);
  const auto single = dixie::simulate_active_clock(config(2, {1.0}, 100));
  CHECK(single.psi_sum.mean == 0.0);
  CHECK(single.hit_time.mean == 2.0);
  CHECK(single.total == 0.0);
  CHECK(single.exact_var_t == Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("active clock identity on random models") {
  const auto r = dixie::simulate_active_clock(config(2, {0.5, 0.3, 0.2}, 100000));
  CHECK(r.within_3sigma);
  std::mt19937_64 rng(5);
  std::exponential_distribution<double> e(1.0);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> w(1 + k % 6);
    for (double& v : w) v = e(rng);
    SimConfig cfg{20000, static_cast<std::uint64_t>(k), {Shape(1 + k % 3),
                                                         ProbabilityVector::from_weights(w)}, 1};
    CAPTURE(k);
    CHECK(dixie::simulate_active_clock(cfg).within_3sigma);
  }
}

TEST_CASE("remaining mass along the m = 1 useful-hit chain") {
  const auto u = dixie::simulate_remaining_mass(ProbabilityVector::uniform(4), 1000, 0, 1);
  for (std::size_t r = 1; r <= 4; ++r) CHECK(u.mean[r - 1] == Approx(r / 4.0).epsilon(1e-14));
  const auto skew = dixie::simulate_remaining_mass(ProbabilityVector({0.7, 0.1, 0.1, 0.1}),
                                                   100000, 0, 1);
  CHECK(skew.mean[1] + 3.0 * skew.std_error[1] < 0.5);
  CHECK(skew.mean[3] == Approx(1.0));
  const auto single = dixie::simulate_remaining_mass(ProbabilityVector({1.0}), 10, 0, 1);
  CHECK(single.mean[0] == 1.0);
}
