#include "dixie/centering.hpp"

#include <cmath>

#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"

namespace dixie {

CenteringPair solve_centering(double n, Shape shape, std::optional<Bracket> start) {
  if (!(n > 1.0) || !std::isfinite(n)) {
    throw NonBracketable("centering needs n > 1");
  }
  const double m = shape.value();
  const double log_n = std::log(n);
  // g(b) = log Q_m(b) + log n is strictly decreasing with g(0) = log n > 0.
  auto g = [&](double b) { return erlang_survival(shape, b).log_value + log_n; };

  double lo, hi;
  if (start) {
    lo = std::max(0.0, start->lo);
    hi = std::max(lo + 1e-8, start->hi);
  } else {
    lo = std::max(m - 1.0, 1e-8);
    hi = m + 2.0 * log_n + 10.0 * std::sqrt(m * log_n + 1.0);
  }
  double g_lo = g(lo);
  if (g_lo <= 0.0) {
    lo = 0.0;
    g_lo = log_n;
  }
  double g_hi = g(hi);
  while (g_hi >= 0.0) {
    lo = hi;
    g_lo = g_hi;
    hi *= 2.0;
    g_hi = g(hi);
    if (!std::isfinite(hi)) throw NonBracketable("centering bracket expansion diverged");
  }

  // Illinois false position with a bisection fallback whenever the bracket
  // fails to halve over two steps.
  int side = 0;
  double width_before = hi - lo;
  int iter = 0;
  while (hi - lo > 1e-12 * (1.0 + lo) && iter < 400) {
    ++iter;
    double x = (lo * g_hi - hi * g_lo) / (g_hi - g_lo);
    if (!(x > lo && x < hi) || (iter % 2 == 0 && hi - lo > 0.5 * width_before)) {
      x = 0.5 * (lo + hi);
    }
    if (iter % 2 == 0) width_before = hi - lo;
    const double gx = g(x);
    if (gx == 0.0) {
      lo = hi = x;
      break;
    }
    if (gx > 0.0) {
      lo = x;
      g_lo = gx;
      if (side == 1) g_hi *= 0.5;
      side = 1;
    } else {
      hi = x;
      g_hi = gx;
      if (side == -1) g_lo *= 0.5;
      side = -1;
    }
  }
  const double b_lo = lo, b_hi = hi;
  const double b = std::abs(g(b_lo)) <= std::abs(g(b_hi)) ? b_lo : b_hi;
  const double a = 1.0 / upper_hazard(shape, b);
  return {n, shape, b, a};
}

QuantileReport quantile_inequality_report(double n, Shape m, const std::vector<double>& x_grid) {
  QuantileReport report{solve_centering(n, m), {}, 0.0, true};
  const auto& pair = report.pair;
  const double log_n = std::log(n);
  for (double x : x_grid) {
    const double y = pair.b + pair.a * x;
    const double log_q = y > 0.0 ? erlang_survival(m, y).log_value : 0.0;
    const double ratio = std::exp(log_n + log_q + x);
    const bool ok = ratio <= 1.0 + 1e-10;
    report.rows.push_back({x, ratio, ok});
    if (x >= 0.0 && !ok) report.right_tail_ok = false;
  }
  report.clock_ratio = n * pair.a * pair.a / pair.b;
  return report;
}

}  // namespace dixie
