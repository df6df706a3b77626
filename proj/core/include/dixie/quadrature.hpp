#pragma once

// Globally adaptive Gauss-Kronrod (7/15 point pair of order 21 in the
// Kronrod rule) integration on a finite interval with user breakpoints.
// Error estimates follow the QUADPACK qk21 heuristic including its
// round-off floor.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <tuple>
#include <vector>

#include "dixie/errors.hpp"

namespace dixie {

struct QuadratureOptions {
  double rel_tol = 1e-12;
  double abs_tol = 0.0;
  int max_panels = 4000;
};

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// 21-point Kronrod abscissae/weights and embedded 10-point Gauss weights.
inline constexpr std::array<double, 11> kXgk = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr std::array<double, 11> kWgk = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077600104226212, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr std::array<double, 5> kWg = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel kronrod21(F& f, double a, double b) {
  constexpr double eps = std::numeric_limits<double>::epsilon();
  constexpr double uflow = std::numeric_limits<double>::min();
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  std::array<double, 10> fv1{}, fv2{};
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double dx = half * kXgk[jtw];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double dx = half * kXgk[jtwm1];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double result = resk * half;
  resabs *= std::abs(half);
  resasc *= std::abs(half);
  double err = std::abs((resk - resg) * half);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  if (resabs > uflow / (50.0 * eps)) err = std::max(50.0 * eps * resabs, err);
  return {a, b, result, err};
}

}  // namespace detail

/// Integrates f over [points.front(), points.back()], seeding one panel per
/// consecutive pair of breakpoints. Breakpoints must be nondecreasing;
/// repeated points are skipped.
template <class F>
QuadratureResult integrate(F&& f, std::span<const double> points, QuadratureOptions opt = {}) {
  std::priority_queue<detail::Panel> heap;
  QuadratureResult out;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    if (points[i + 1] < points[i]) throw InvalidArgument("quadrature breakpoints must be sorted");
    if (points[i + 1] == points[i]) continue;
    heap.push(detail::kronrod21(f, points[i], points[i + 1]));
    out.evaluations += 21;
  }
  auto totals = [&] {
    // Re-sum from scratch so the running totals do not drift.
    auto copy = heap;
    double v = 0.0, e = 0.0;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    return std::pair{v, e};
  };
  auto [value, error] = totals();
  int panels = static_cast<int>(heap.size());
  int since_resum = 0;
  while (!heap.empty() && error > std::max(opt.abs_tol, opt.rel_tol * std::abs(value)) &&
         panels < opt.max_panels) {
    const detail::Panel worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const auto left = detail::kronrod21(f, worst.a, mid);
    const auto right = detail::kronrod21(f, mid, worst.b);
    out.evaluations += 42;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++panels;
    if (++since_resum == 64) {
      std::tie(value, error) = totals();
      since_resum = 0;
    }
  }
  std::tie(value, error) = totals();
  out.value = value;
  out.abs_error = error;
  out.converged = error <= std::max(opt.abs_tol, opt.rel_tol * std::abs(value));
  return out;
}

template <class F>
QuadratureResult integrate(F&& f, double a, double b, QuadratureOptions opt = {}) {
  const std::array<double, 2> pts{a, b};
  return integrate(std::forward<F>(f), std::span<const double>(pts), opt);
}

/// Log-spaced grid from lo to hi inclusive with `per_decade` points per
/// factor of ten.
std::vector<double> log_grid(double lo, double hi, int per_decade = 200);
std::vector<double> linear_grid(double lo, double hi, int points);

/// Monotonicity with slack 1e-12 (1 + |v|): a step counts as a violation
/// only when it moves the wrong way by more than the slack.
struct MonotoneCheck {
  bool holds = true;
  std::size_t violations = 0;
  std::size_t first_violation = 0;
  double worst_excess = 0.0;  ///< largest wrong-way step beyond slack
};
MonotoneCheck check_increasing(std::span<const double> v, double rel_slack = 1e-12);
MonotoneCheck check_decreasing(std::span<const double> v, double rel_slack = 1e-12);

}  // namespace dixie
