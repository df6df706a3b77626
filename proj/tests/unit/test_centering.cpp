#include <cmath>
#include <vector>

#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/quadrature.hpp"
#include "doctest.h"
#include "oracles.hpp"

using dixie::Shape;
using doctest::Approx;

TEST_CASE("m = 1 centering is log n with unit scale") {
  const auto c = dixie::solve_centering(100.0, Shape(1));
  CHECK(c.b == Approx(4.6051701860).epsilon(1e-10));
  CHECK(c.a == Approx(1.0).epsilon(1e-12));
  const auto e = dixie::solve_centering(std::exp(1.0), Shape(1));
  CHECK(e.b == Approx(1.0).epsilon(1e-11));
  CHECK(e.a == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("m = 2, n = 100 against a bisection oracle") {
  const double b_ref = oracle::centering_b(100.0, 2);
  CHECK(b_ref == Approx(6.6384).epsilon(1e-4));
  const auto c = dixie::solve_centering(100.0, Shape(2));
  CHECK(c.b == Approx(b_ref).epsilon(1e-11));
  CHECK(c.a == Approx((1.0 + b_ref) / b_ref).epsilon(1e-10));
  CHECK(c.a == Approx(1.1506).epsilon(1e-4));
}

TEST_CASE("pair invariants across regimes") {
  for (int m : {1, 2, 3, 5, 10, 50, 400}) {
    for (double n : {1.5, 10.0, 1e3, 1e6, 1e12}) {
      const auto c = dixie::solve_centering(n, Shape(m));
      CAPTURE(m);
      CAPTURE(n);
      CHECK(c.b > 0.0);
      CHECK(c.a > 0.0);
      CHECK(std::abs(n * dixie::erlang_survival(Shape(m), c.b).value - 1.0) <= 1e-10);
      CHECK(c.a == Approx(1.0 / dixie::upper_hazard(Shape(m), c.b)).epsilon(1e-12));
    }
  }
}

TEST_CASE("re-solving from perturbed brackets gives the same root") {
  for (int m : {1, 3, 7}) {
    const auto base = dixie::solve_centering(1e5, Shape(m));
    for (auto br : {dixie::Bracket{0.0, 1.0}, dixie::Bracket{base.b * 0.5, base.b * 0.9},
                    dixie::Bracket{base.b * 1.1, base.b * 3.0}, dixie::Bracket{0.1, 500.0}}) {
      const auto again = dixie::solve_centering(1e5, Shape(m), br);
      CHECK(again.b == Approx(base.b).epsilon(1e-10));
    }
  }
}

TEST_CASE("n <= 1 is not bracketable") {
  CHECK_THROWS_AS(dixie::solve_centering(1.0, Shape(2)), dixie::NonBracketable);
  CHECK_THROWS_AS(dixie::solve_centering(0.5, Shape(1)), dixie::NonBracketable);
}

TEST_CASE("quantile report examples") {
  const auto r1 = dixie::quantile_inequality_report(1e6, Shape(1), {2.0});
  CHECK(r1.rows[0].ratio == Approx(1.0).epsilon(1e-9));
  const auto r3 = dixie::quantile_inequality_report(1e6, Shape(3), {1.0});
  CHECK(r3.rows[0].ratio > 0.9);
  CHECK(r3.rows[0].ratio <= 1.0);
  const auto r2 = dixie::quantile_inequality_report(1e6, Shape(2), {-1.0});
  // increasing hazard puts the ratio below 1 on the left of the window too
  CHECK(r2.rows[0].ratio <= 1.0);
  CHECK(r2.rows[0].ratio > 0.99);
}

TEST_CASE("right-tail bound and local ratio convergence") {
  const auto xs = dixie::linear_grid(-3.0, 3.0, 61);
  for (int m : {1, 2, 3, 5}) {
    const auto lo = dixie::quantile_inequality_report(1e4, Shape(m), xs);
    const auto hi = dixie::quantile_inequality_report(1e8, Shape(m), xs);
    CHECK(lo.right_tail_ok);
    CHECK(hi.right_tail_ok);
    double dev_lo = 0.0, dev_hi = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      dev_lo = std::max(dev_lo, std::abs(lo.rows[i].ratio - 1.0));
      dev_hi = std::max(dev_hi, std::abs(hi.rows[i].ratio - 1.0));
    }
    CAPTURE(m);
    if (m == 1) {
      CHECK(dev_hi <= 1e-9);
    } else {
      CHECK(dev_hi < dev_lo);
    }
  }
}

TEST_CASE("clock separation n a^2 / b grows with n") {
  for (int m = 1; m <= 5; ++m) {
    std::vector<double> ratios;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      ratios.push_back(dixie::quantile_inequality_report(n, Shape(m), {}).clock_ratio);
    }
    CHECK(dixie::check_increasing(ratios, 0.0).holds);
  }
}
