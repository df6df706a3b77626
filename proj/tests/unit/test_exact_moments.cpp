#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "dixie/errors.hpp"
#include "dixie/exact_moments.hpp"
#include "doctest.h"
#include "oracles.hpp"

using dixie::CollectorModel;
using dixie::ProbabilityVector;
using dixie::Shape;
using doctest::Approx;

namespace {

CollectorModel model(int m, std::vector<double> p) {
  return {Shape(m), ProbabilityVector(std::move(p))};
}

ProbabilityVector random_dirichlet(std::mt19937_64& rng, std::size_t n) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  for (double& v : w) v = e(rng);
  return ProbabilityVector::from_weights(w);
}

}  // namespace

TEST_CASE("rising moments of deterministic single-coupon laws") {
  CHECK(dixie::rising_moment_exact(model(1, {1.0}), 3).value == Approx(6.0).epsilon(1e-14));
  CHECK(dixie::rising_moment_exact(model(2, {1.0}), 1).value == Approx(2.0).epsilon(1e-14));
  CHECK(dixie::rising_moment_quadrature(model(1, {1.0}), 1).value == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("two fair coupons: T = 1 + Geometric(1/2)") {
  const auto ref = oracle::two_coupon_m1(0.5, 0.5);
  CHECK(ref.rising2 == Approx(14.0));
  const auto m = model(1, {0.5, 0.5});
  CHECK(dixie::rising_moment_exact(m, 2).value == Approx(14.0).epsilon(1e-14));
  const auto q = dixie::rising_moment_quadrature(m, 1);
  CHECK(std::abs(q.value - 3.0) <= 1e-9);
  const auto rep = dixie::mean_variance(m);
  CHECK(rep.mean == Approx(3.0).epsilon(1e-14));
  CHECK(rep.var_T == Approx(2.0).epsilon(1e-13));
  CHECK(rep.method == dixie::MomentMethod::exact_ie);
}

TEST_CASE("three fair coupons: harmonic oracle") {
  const auto m = model(1, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(std::abs(dixie::rising_moment_quadrature(m, 1).value - 5.5) <= 1e-9);
  const auto rep = dixie::mean_variance(m);
  CHECK(rep.var_T == Approx(6.75).epsilon(1e-13));
  REQUIRE(rep.closed_form_var_T.has_value());
  CHECK(*rep.closed_form_var_T == Approx(6.75).epsilon(1e-14));
}

TEST_CASE("unequal two-coupon closed form") {
  const auto ref = oracle::two_coupon_m1(0.6, 0.4);
  CHECK(ref.mean == Approx(3.1666666667).epsilon(1e-9));
  CHECK(ref.var_T == Approx(2.8611).epsilon(1e-4));
  const auto rep = dixie::mean_variance(model(1, {0.6, 0.4}));
  CHECK(rep.mean == Approx(ref.mean).epsilon(1e-13));
  CHECK(rep.var_T == Approx(ref.var_T).epsilon(1e-12));
}

TEST_CASE("exact formula against the Markov-chain law of T") {
  const std::vector<std::vector<double>> laws = {
      {0.5, 0.3, 0.2}, {0.7, 0.1, 0.1, 0.1}, {0.25, 0.25, 0.25, 0.25}, {0.9, 0.1}};
  for (const auto& p : laws) {
    for (int m = 1; m <= 3; ++m) {
      const auto ref = oracle::rising_moments_by_chain(p, m, 3);
      for (int r = 1; r <= 3; ++r) {
        const auto ex = dixie::rising_moment_exact(model(m, p), r);
        CAPTURE(m);
        CAPTURE(r);
        CHECK(ex.value == Approx(static_cast<double>(ref[r])).epsilon(1e-11));
        CHECK_FALSE(ex.cancellation_warning);
      }
    }
  }
}

TEST_CASE("exact and quadrature agree on random Dirichlet models") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<int> n_dist(1, 8), m_dist(1, 4), r_dist(1, 3);
  for (int trial = 0; trial < 50; ++trial) {
    const auto p = random_dirichlet(rng, n_dist(rng));
    const CollectorModel mod{Shape(m_dist(rng)), p};
    const int r = r_dist(rng);
    const auto ex = dixie::rising_moment_exact(mod, r);
    const auto qu = dixie::rising_moment_quadrature(mod, r);
    CAPTURE(trial);
    CHECK(qu.converged);
    CHECK(std::abs(ex.value - qu.value) <= 10.0 * (ex.abs_error + qu.abs_error));
    CHECK(ex.value == Approx(qu.value).epsilon(1e-7));
  }
}

TEST_CASE("uniform m = 1 closed form for N up to 12") {
  for (int n = 2; n <= 12; ++n) {
    const auto rep = dixie::mean_variance({Shape(1), ProbabilityVector::uniform(n)});
    const double ref = n * n * oracle::harmonic(n, 2) - n * oracle::harmonic(n, 1);
    CHECK(rep.var_T == Approx(ref).epsilon(1e-10));
    CHECK(rep.mean == Approx(n * oracle::harmonic(n, 1)).epsilon(1e-12));
  }
}

TEST_CASE("quadrature route of mean_variance matches exact route") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 10; ++trial) {
    const CollectorModel mod{Shape(1 + trial % 4), random_dirichlet(rng, 2 + trial % 6)};
    const auto ex = dixie::mean_variance(mod);
    const auto qu = dixie::mean_variance(mod, {.exact_max_coupons = 0});
    CHECK(qu.method == dixie::MomentMethod::quadrature);
    CHECK(qu.converged);
    CHECK(qu.mean == Approx(ex.mean).epsilon(1e-10));
    CHECK(qu.var_T == Approx(ex.var_T).epsilon(1e-8));
  }
}

TEST_CASE("large uniform laws use grouping and closed forms") {
  const auto rep = dixie::mean_variance({Shape(1), ProbabilityVector::uniform(1000)});
  CHECK(rep.method == dixie::MomentMethod::closed_form_uniform_m1);
  const auto q = dixie::mean_variance({Shape(1), ProbabilityVector::uniform(1000)},
                                      {.exact_max_coupons = 2000});
  // guard refuses 2^1000 subsets, so the closed form still applies
  CHECK(q.method == dixie::MomentMethod::closed_form_uniform_m1);
  const auto quad = dixie::poissonized_moments_quadrature({Shape(1), ProbabilityVector::uniform(1000)});
  CHECK(quad.mean == Approx(rep.mean).epsilon(1e-11));
  CHECK(quad.variance - quad.mean == Approx(rep.var_T).epsilon(1e-9));
}

TEST_CASE("variance is nonnegative and E T increases with m") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = random_dirichlet(rng, 1 + trial % 6);
    double prev = 0.0;
    for (int m = 1; m <= 4; ++m) {
      const auto rep = dixie::mean_variance({Shape(m), p});
      CHECK(rep.var_T >= -rep.abs_err_estimate);
      CHECK(rep.var_X == Approx(rep.var_T + rep.mean));
      CHECK(rep.mean > prev);
      prev = rep.mean;
    }
  }
}

TEST_CASE("exact mode is bit-for-bit permutation invariant") {
  std::vector<double> p{0.05, 0.4, 0.15, 0.3, 0.1};
  const auto base = dixie::mean_variance({Shape(3), ProbabilityVector(p)});
  std::sort(p.begin(), p.end());
  do {
    const auto rep = dixie::mean_variance({Shape(3), ProbabilityVector(p)});
    CHECK(rep.mean == base.mean);
    CHECK(rep.rising2 == base.rising2);
    CHECK(rep.var_T == base.var_T);
  } while (std::next_permutation(p.begin(), p.end()));
}

TEST_CASE("guards and argument checks") {
  CHECK_THROWS_AS(dixie::rising_moment_exact({Shape(4), ProbabilityVector::uniform(12)}, 1),
                  dixie::TooLarge);
  CHECK_THROWS_AS(dixie::rising_moment_exact(model(1, {1.0}), 7), dixie::InvalidArgument);
  CHECK_THROWS_AS(dixie::rising_moment_quadrature(model(1, {1.0}), 0), dixie::InvalidArgument);
}
