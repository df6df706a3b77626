#include "dixie/exact_moments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/poissonized.hpp"
#include "dixie/quadrature.hpp"

namespace dixie {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kQuadTarget = 1e-10;

void check_order(int r) {
  if (r < 1 || r > kMaxRisingOrder) {
    throw InvalidArgument("rising moment order must be in 1..6, got " + std::to_string(r));
  }
}

// Breakpoints scaled by the unit-defect time; the integrands change shape
// within a few multiples of it.
std::vector<double> breakpoints(double lo, double hi, double scale, std::span<const double> rel) {
  std::vector<double> pts{lo};
  for (double r : rel) {
    const double t = r * scale;
    if (t > lo && t < hi) pts.push_back(t);
  }
  pts.push_back(hi);
  return pts;
}

constexpr std::array<double, 6> kBelow = {0.0625, 0.125, 0.25, 0.5, 0.75, 0.9};
constexpr std::array<double, 9> kAbove = {1.1, 1.25, 1.5, 2.0, 3.0, 4.0, 6.0, 8.0, 12.0};
constexpr std::array<double, 15> kAll = {0.0625, 0.125, 0.25, 0.5, 0.75, 0.9, 1.0, 1.1,
                                        1.25,   1.5,   2.0,  3.0, 4.0,  6.0, 8.0};

// Certified bound on r int_T^inf t^{r-1} P(X > t) dt via P(X > t) <= sum_j Q_m(p_j t).
double tail_bound(const PoissonizedLaw& law, int k, double scale, double horizon) {
  // k-th power weight: int_T^inf t^k sum_j Q(p_j t) dt
  double s = 0.0;
  const auto& g = law.groups();
  for (std::size_t i = 0; i < g.size(); ++i) {
    s += g.count[i] * std::pow(g.rate[i], -(k + 1)) *
         survival_moment_tail(law.shape(), k, g.rate[i] * horizon);
  }
  return scale * s;
}

double harmonic(std::size_t n, int power) {
  double s = 0.0;
  for (std::size_t k = n; k >= 1; --k) s += std::pow(static_cast<double>(k), -power);
  return s;
}

}  // namespace

std::string_view to_string(MomentMethod method) {
  switch (method) {
    case MomentMethod::exact_ie: return "exact_ie";
    case MomentMethod::quadrature: return "quadrature";
    case MomentMethod::closed_form_uniform_m1: return "closed_form_uniform_m1";
  }
  return "unknown";
}

bool exact_within_guard(const CollectorModel& model) {
  const double log_terms = static_cast<double>(model.coupons()) * std::log1p(model.m.value());
  return log_terms <= std::log(kExactTermGuard) + 1e-12;
}

RisingMoment rising_moment_exact(const CollectorModel& model, int r) {
  check_order(r);
  if (!exact_within_guard(model)) {
    throw TooLarge("inclusion-exclusion needs (1+m)^N <= 1e8");
  }
  const int m = model.m.value();
  std::vector<double> p(model.p.values().begin(), model.p.values().end());
  std::sort(p.begin(), p.end());
  const std::size_t n = p.size();

  std::vector<double> log_gamma_shift;  // lgamma(k + r) for k = 0..n(m-1)
  const std::size_t max_degree = n * static_cast<std::size_t>(m - 1);
  for (std::size_t k = 0; k <= max_degree; ++k) {
    log_gamma_shift.push_back(std::lgamma(static_cast<double>(k + r)));
  }
  std::vector<double> inv_factorial(m);
  inv_factorial[0] = 1.0;
  for (int a = 1; a < m; ++a) inv_factorial[a] = inv_factorial[a - 1] / a;

  std::vector<double> poly, next, members;
  double sum = 0.0, carry = 0.0, abs_sum = 0.0;
  const std::uint64_t subsets = std::uint64_t{1} << n;
  for (std::uint64_t mask = 1; mask < subsets; ++mask) {
    members.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) members.push_back(p[i]);
    }
    double p_a = 0.0;
    for (double v : members) p_a += v;

    // Coefficients of prod_{i in A} sum_{a<m} (p_i / p_A)^a t^a / a!.
    poly.assign(1, 1.0);
    for (double v : members) {
      const double x = v / p_a;
      next.assign(poly.size() + m - 1, 0.0);
      double xa = 1.0;
      for (int a = 0; a < m; ++a) {
        const double c = xa * inv_factorial[a];
        for (std::size_t k = 0; k < poly.size(); ++k) next[k + a] += poly[k] * c;
        xa *= x;
      }
      poly.swap(next);
    }
    // sum_k c_k (k + r - 1)! in log scale; every c_k is nonnegative.
    double log_max = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (poly[k] > 0.0) log_max = std::max(log_max, std::log(poly[k]) + log_gamma_shift[k]);
    }
    double inner = 0.0;
    for (std::size_t k = 0; k < poly.size(); ++k) {
      if (poly[k] > 0.0) inner += std::exp(std::log(poly[k]) + log_gamma_shift[k] - log_max);
    }
    const double magnitude =
        std::exp(std::log(static_cast<double>(r)) + log_max + std::log(inner) - r * std::log(p_a));
    const double term = (members.size() % 2 == 1) ? magnitude : -magnitude;

    const double t = sum + term;
    carry += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    abs_sum += magnitude;
  }
  RisingMoment out;
  out.value = sum + carry;
  const double per_term = 8.0 * kEps * (static_cast<double>(n * m) + 4.0);
  out.abs_error = per_term * abs_sum + kEps * std::abs(out.value);
  out.cancellation_warning = out.abs_error > 1e-6 * std::abs(out.value);
  return out;
}

RisingMoment rising_moment_quadrature(const CollectorModel& model, int r) {
  check_order(r);
  const PoissonizedLaw law(model);
  const double scale = law.unit_defect_time();
  const double horizon = law.horizon();
  const auto pts = breakpoints(0.0, horizon, scale, kAll);
  auto integrand = [&](double t) {
    return r * std::pow(t, r - 1) * law.survival(t);
  };
  const auto q = integrate(integrand, pts, {.rel_tol = 1e-13, .abs_tol = 0.0, .max_panels = 6000});
  RisingMoment out;
  out.value = q.value;
  out.abs_error = q.abs_error + tail_bound(law, r - 1, r, horizon);
  out.converged = out.abs_error <= kQuadTarget * std::abs(out.value);
  return out;
}

PoissonizedMoments poissonized_moments_quadrature(const CollectorModel& model) {
  const PoissonizedLaw law(model);
  const double c = law.unit_defect_time();
  const double horizon = law.horizon();
  const auto lower = breakpoints(0.0, c, c, kBelow);
  const auto upper = breakpoints(c, horizon, c, kAbove);
  const QuadratureOptions opt{.rel_tol = 1e-13, .abs_tol = 0.0, .max_panels = 6000};

  const auto s1 = integrate([&](double t) { return law.survival(t); }, upper, opt);
  const auto g1 = integrate([&](double t) { return law.cdf(t); }, lower, opt);
  const auto s2 = integrate([&](double t) { return 2.0 * (t - c) * law.survival(t); }, upper, opt);
  const auto g2 = integrate([&](double t) { return 2.0 * (c - t) * law.cdf(t); }, lower, opt);

  const double tail1 = tail_bound(law, 0, 1.0, horizon);
  const double tail2 = tail_bound(law, 1, 2.0, horizon);
  const double d1 = s1.value - g1.value;
  const double d2 = s2.value + g2.value;
  PoissonizedMoments out;
  out.mean = c + d1;
  out.variance = d2 - d1 * d1;
  out.mean_error = s1.abs_error + g1.abs_error + tail1;
  out.variance_error = s2.abs_error + g2.abs_error + tail2 + 2.0 * std::abs(d1) * out.mean_error;
  out.converged = out.mean_error <= kQuadTarget * out.mean &&
                  out.variance_error <= 10.0 * kQuadTarget * out.variance;
  return out;
}

UniformM1 uniform_m1_closed_form(std::size_t n) {
  if (n == 0) throw InvalidArgument("closed form needs N >= 1");
  const double dn = static_cast<double>(n);
  const double h1 = harmonic(n, 1);
  const double h2 = harmonic(n, 2);
  return {dn * h1, dn * dn * h2 - dn * h1};
}

MomentReport mean_variance(const CollectorModel& model, MomentOptions options) {
  MomentReport report;
  const std::size_t n = model.coupons();
  const bool uniform_m1 = model.m.value() == 1 && model.p.is_uniform();
  std::optional<UniformM1> closed;
  if (uniform_m1) {
    closed = uniform_m1_closed_form(n);
    report.closed_form_var_T = closed->var_T;
  }

  if (n <= options.exact_max_coupons && exact_within_guard(model)) {
    const auto r1 = rising_moment_exact(model, 1);
    const auto r2 = rising_moment_exact(model, 2);
    report.method = MomentMethod::exact_ie;
    report.mean = r1.value;
    report.rising2 = r2.value;
    report.var_T = r2.value - r1.value - r1.value * r1.value;
    report.var_X = report.var_T + report.mean;
    report.abs_err_estimate =
        r2.abs_error + r1.abs_error * (1.0 + 2.0 * std::abs(r1.value)) + 4.0 * kEps * r2.value;
    report.cancellation_warning = r1.cancellation_warning || r2.cancellation_warning;
    return report;
  }
  if (closed) {
    report.method = MomentMethod::closed_form_uniform_m1;
    report.mean = closed->mean;
    report.var_T = closed->var_T;
    report.var_X = report.var_T + report.mean;
    report.rising2 = report.var_X + report.mean * report.mean;
    report.abs_err_estimate = 1e-13 * (report.rising2);
    return report;
  }
  const auto pm = poissonized_moments_quadrature(model);
  report.method = MomentMethod::quadrature;
  report.mean = pm.mean;
  report.var_X = pm.variance;
  report.var_T = pm.variance - pm.mean;
  report.rising2 = pm.variance + pm.mean * pm.mean;
  report.abs_err_estimate = pm.variance_error + pm.mean_error;
  report.converged = pm.converged;
  return report;
}

}  // namespace dixie
