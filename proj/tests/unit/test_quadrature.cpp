#include <cmath>
#include <numbers>
#include <vector>

#include "dixie/errors.hpp"
#include "dixie/quadrature.hpp"
#include "doctest.h"

using doctest::Approx;

TEST_CASE("smooth integrals") {
  const auto q = dixie::integrate([](double x) { return std::exp(-x); }, 0.0, 40.0);
  CHECK(q.converged);
  CHECK(q.value == Approx(-std::expm1(-40.0)).epsilon(1e-14));
  const auto s = dixie::integrate([](double x) { return std::sin(x); }, 0.0, std::numbers::pi);
  CHECK(s.value == Approx(2.0).epsilon(1e-14));
}

TEST_CASE("endpoint singularity converges with honest error") {
  const auto q = dixie::integrate([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0,
                                  {.rel_tol = 1e-10, .abs_tol = 0.0, .max_panels = 4000});
  CHECK(q.value == Approx(2.0).epsilon(1e-9));
  CHECK(std::abs(q.value - 2.0) <= q.abs_error * 10.0);
}

TEST_CASE("non-convergence is reported") {
  const auto q = dixie::integrate([](double x) { return std::sin(1.0 / x); }, 1e-9, 1.0,
                                  {.rel_tol = 1e-15, .abs_tol = 0.0, .max_panels = 20});
  CHECK_FALSE(q.converged);
}

TEST_CASE("grids") {
  const auto g = dixie::log_grid(1e-2, 1e2, 200);
  CHECK(g.size() == 801);
  CHECK(g.front() == 1e-2);
  CHECK(g.back() == 1e2);
  const auto l = dixie::linear_grid(-3.0, 4.0, 141);
  CHECK(l.size() == 141);
  CHECK(l[20] == Approx(-2.0));
}

TEST_CASE("monotone checks honour slack") {
  const std::vector<double> up{1.0, 2.0, 2.0, 3.0};
  CHECK(dixie::check_increasing(up).holds);
  const std::vector<double> dip{1.0, 2.0, 1.5, 3.0};
  const auto c = dixie::check_increasing(dip);
  CHECK_FALSE(c.holds);
  CHECK(c.violations == 1);
  CHECK(c.first_violation == 1);
  CHECK(dixie::check_decreasing(std::vector<double>{3.0, 2.0, 1.0}).holds);
}

TEST_CASE("unsorted breakpoints are rejected") {
  const double pts[] = {0.0, 2.0, 1.0};
  CHECK_THROWS_AS(dixie::integrate([](double x) { return x; }, pts), dixie::InvalidArgument);
  const double dup[] = {0.0, 1.0, 1.0, 2.0};
  CHECK(dixie::integrate([](double x) { return x; }, dup).value == doctest::Approx(2.0));
}
