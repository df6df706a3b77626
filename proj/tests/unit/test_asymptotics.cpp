#include <cmath>
#include <numbers>
#include <vector>

#include "dixie/asymptotics.hpp"
#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using dixie::ProbabilityVector;
using dixie::Shape;
using doctest::Approx;

TEST_CASE("Gumbel fit at n = 1e6, m = 1") {
  const auto rep = dixie::gumbel_fit_equal(1e6, Shape(1), dixie::default_gumbel_grid());
  CHECK(rep.grid.size() == 141);
  CHECK(rep.sup_distance < 0.01);
  const auto far = dixie::gumbel_fit_equal(1e3, Shape(2), {10.0});
  CHECK(std::abs(far.exact_cdf[0] - far.gumbel[0]) < 1e-4);
}

TEST_CASE("Gumbel sup distance decreases in n") {
  for (int m : {1, 2, 3, 5}) {
    std::vector<double> d;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      d.push_back(dixie::gumbel_fit_equal(n, Shape(m), dixie::default_gumbel_grid()).sup_distance);
    }
    CAPTURE(m);
    CHECK(dixie::check_decreasing(d, 0.0).holds);
  }
}

TEST_CASE("moment asymptotics, m = 1") {
  const auto rows = dixie::equal_moment_asymptotics(Shape(1), {1000});
  const double n = 1000;
  CHECK(rows[0].var_t ==
        Approx(n * n * oracle::harmonic(1000, 2) - n * oracle::harmonic(1000, 1)).epsilon(1e-12));
  CHECK(rows[0].a == Approx(1.0).epsilon(1e-12));
  CHECK(rows[0].var_prediction == Approx(std::numbers::pi * std::numbers::pi / 6 * n * n));
  CHECK(rows[0].var_residual < 0.01);
  CHECK(rows[0].var_residual == Approx(std::log(n) / (1.645 * n)).epsilon(0.1));
}

TEST_CASE("moment asymptotics residuals decrease, m = 2, 3") {
  for (int m : {2, 3}) {
    const auto rows = dixie::equal_moment_asymptotics(Shape(m), {1000, 10000, 100000});
    std::vector<double> mean_res, var_res;
    for (const auto& r : rows) {
      CHECK(r.converged);
      mean_res.push_back(r.mean_residual);
      var_res.push_back(r.var_residual);
    }
    CAPTURE(m);
    CHECK(dixie::check_decreasing(mean_res, 0.0).holds);
    CHECK(dixie::check_decreasing(var_res, 0.0).holds);
  }
}

TEST_CASE("terminal defect mass examples") {
  for (int m : {1, 3}) {
    const std::size_t n = 500;
    const double b = dixie::solve_centering(n, Shape(m)).b;
    const auto d = dixie::terminal_defect_mass(ProbabilityVector::uniform(n), Shape(m), n * b);
    CHECK(d.mass == Approx(1.0).epsilon(1e-10));
    CHECK(d.atomless <= d.max_q * d.mass * (1 + 1e-12));
  }
  const auto single = dixie::terminal_defect_mass(ProbabilityVector({1.0}), Shape(2), 1.7);
  CHECK(single.mass == Approx(dixie::erlang_survival(Shape(2), 1.7).value));
  CHECK(single.atomless == Approx(single.mass * single.mass));
}

TEST_CASE("power-law defect mass at x = 0 via the generic routine") {
  const std::size_t n = 100000;
  const auto s = dixie::powerlaw_scaling(n, 1.0, Shape(2));
  const auto d =
      dixie::terminal_defect_mass(ProbabilityVector::power_law(n, 1.0), Shape(2), s.b);
  CHECK(std::abs(d.mass - 1.0) < 0.15);
  const auto prof = dixie::case2_powerlaw(n, 1.0, Shape(2), {0.0});
  CHECK(prof.mass[0] == Approx(d.mass).epsilon(1e-9));
}

TEST_CASE("Case II examples") {
  const auto big = dixie::case2_powerlaw(1000000, 1.0, Shape(2), {0.0, 2.0});
  const auto small = dixie::case2_powerlaw(10000, 1.0, Shape(2), {0.0, 2.0});
  CHECK(big.relative_error[0] < 0.15);
  CHECK(big.relative_error[0] < small.relative_error[0]);
  CHECK(big.relative_error[1] < 0.15);
  for (const auto* prof : {&big, &small}) {
    for (std::size_t i = 0; i < prof->grid.size(); ++i) {
      CHECK(prof->atomless[i] <= prof->max_q[i] * prof->mass[i] * (1 + 1e-12));
    }
  }
  CHECK(big.atomless[0] < 1e-3);
}

TEST_CASE("power-law normalizer regimes") {
  for (double alpha : {0.5, 1.0, 2.0}) {
    const auto c = dixie::powerlaw_normalizer_check(1000000, alpha);
    CAPTURE(alpha);
    CHECK(c.ok);
  }
  CHECK(dixie::powerlaw_normalizer_check(1000000, 2.0).a_n ==
        Approx(std::numbers::pi * std::numbers::pi / 6).epsilon(1e-5));
}

TEST_CASE("Case I limit CDF tail") {
  const auto fam = dixie::linear_family();
  const double tail = 1.0 - dixie::case1_partial_cdf(fam, Shape(1), 20.0, 5000);
  CHECK(tail < 3e-9);
  CHECK(tail > 0.0);
}

TEST_CASE("Case I limit mean: pentagonal series and finite subset sums") {
  const auto fam = dixie::linear_family();
  const auto rep = dixie::case1_limit(fam, Shape(1), {20});
  CHECK(rep.limit_moment[0] == Approx(static_cast<double>(oracle::pentagonal_max_mean())).epsilon(1e-8));
  CHECK(rep.truncation_bound <= 1e-10);
}

TEST_CASE("finite products against exact subset sums") {
  const auto fam = dixie::linear_family();
  std::vector<long> rates;
  for (long j = 1; j <= 20; ++j) rates.push_back(j);
  const double pts[] = {0.0, 0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 40.0};
  for (int r = 1; r <= 2; ++r) {
    const auto q = dixie::integrate(
        [&](double s) {
          return r * std::pow(s, r - 1) * (1.0 - dixie::case1_partial_cdf(fam, Shape(1), s, 20));
        },
        pts);
    CHECK(q.value ==
          Approx(static_cast<double>(oracle::max_exponential_moment(rates, r))).epsilon(1e-10));
  }
  // J = 20 cannot certify the infinite product.
  CHECK_THROWS_AS(dixie::case1_limit(fam, Shape(1), {5}, 20), dixie::TruncationInsufficient);
}

TEST_CASE("Case I convergence across N") {
  const auto rep = dixie::case1_limit(dixie::linear_family(), Shape(1), {100, 200, 400});
  CHECK(rep.gaps_decreasing);
  CHECK(rep.kolmogorov_decreasing);
  for (const auto& row : rep.rows) {
    CHECK(row.gap[0] > 0.0);
    CHECK(row.scaled_moment[0] == Approx(rep.limit_moment[0] - row.gap[0]).epsilon(1e-9));
    CHECK(row.scaled_moment[1] == Approx(rep.limit_moment[1] - row.gap[1]).epsilon(1e-9));
  }
}

TEST_CASE("Case I quadratic family, m = 2") {
  const auto rep = dixie::case1_limit(dixie::quadratic_family(), Shape(2), {10, 20, 40});
  CHECK(rep.gaps_decreasing);
  CHECK(rep.kolmogorov_decreasing);
}
