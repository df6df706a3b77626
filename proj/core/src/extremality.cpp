#include "dixie/extremality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/exact_moments.hpp"
#include "dixie/gamma_kernel.hpp"

namespace dixie {
namespace {

std::vector<double> w_breakpoints(const PoissonizedLaw& law) {
  const double c = law.unit_defect_time();
  std::vector<double> pts{0.0};
  for (double f : {1.0 / 16, 0.125, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 8.0}) pts.push_back(f * c);
  const double hz = law.horizon();
  while (pts.back() >= hz) pts.pop_back();
  pts.push_back(hz);
  return pts;
}

double mean_on_ray(const RadialDirection& h, Shape m, double theta) {
  return mean_variance({m, h.at(theta)}).mean;
}

double var_on_ray(const RadialDirection& h, Shape m, double theta) {
  return mean_variance({m, h.at(theta)}).var_T;
}

}  // namespace

RadialScanResult radial_variance_scan(const RadialDirection& h, Shape m,
                                      std::optional<double> theta_max, int steps) {
  if (steps < 2) throw InvalidArgument("a radial scan needs at least 2 points");
  const double tmax = theta_max.value_or(0.5 * h.exit_theta());
  if (!(tmax > 0.0) || !std::isfinite(tmax)) throw InvalidArgument("theta_max must be positive");
  const double u = 1.0 / static_cast<double>(h.size());
  for (double hi : h.components()) {
    if (u + tmax * hi < 1e-6) throw DomainExit("theta_max pushes a probability below 1e-6");
  }

  RadialScanResult out{h, m, {}, {}, {}, {}, 0, false};
  for (int k = 0; k < steps; ++k) {
    const double theta = tmax * k / (steps - 1);
    const auto rep = mean_variance({m, h.at(theta)});
    out.thetas.push_back(theta);
    out.variances.push_back(rep.var_T);
    out.variance_errors.push_back(rep.abs_err_estimate);
  }
  for (int k = 0; k + 1 < steps; ++k) {
    const double tol =
        std::max(1e-10, 10.0 * out.variance_errors[k] + 10.0 * out.variance_errors[k + 1]);
    if (!(out.variances[k + 1] - out.variances[k] > tol)) ++out.violations;
  }
  out.verdict = out.violations == 0;

  for (double frac : {0.25, 0.5, 0.75}) {
    const double theta = frac * tmax;
    const double step = 1e-4 * tmax;
    WIntegralCheck chk{};
    chk.theta = theta;
    chk.w_integral = radial_w_moments(h, m, theta).mass.value;
    chk.mean_derivative =
        (mean_on_ray(h, m, theta + step) - mean_on_ray(h, m, theta - step)) / (2.0 * step);
    chk.rel_diff = std::abs(chk.w_integral - chk.mean_derivative) /
                   std::max(std::abs(chk.mean_derivative), std::numeric_limits<double>::min());
    chk.ok = chk.rel_diff <= 1e-5;
    out.w_checks.push_back(chk);
  }
  return out;
}

WMoments radial_w_moments(const RadialDirection& h, Shape m, double theta) {
  const PoissonizedLaw law({m, h.at(theta)});
  const auto pts = w_breakpoints(law);
  const QuadratureOptions opt{.rel_tol = 1e-12, .abs_tol = 0.0, .max_panels = 4000};
  return {integrate([&](double t) { return radial_derivative_w(h, m, theta, t); }, pts, opt),
          integrate([&](double t) { return t * radial_derivative_w(h, m, theta, t); }, pts, opt)};
}

MlrReport mlr_report(const RadialDirection& h, Shape m, double theta, int per_decade) {
  const auto q = h.at(theta);
  const CollectorModel model{m, q};
  const double c = PoissonizedLaw(model).unit_defect_time();
  const auto grid = log_grid(1e-2 * c, 1e2 * c, per_decade);

  MlrReport out;
  std::vector<double> ratio, mean_m;
  out.min_w = std::numeric_limits<double>::infinity();
  for (double t : grid) {
    const double w = radial_derivative_w(h, m, theta, t);
    out.min_w = std::min(out.min_w, w);
    if (w < 0.0) ++out.negative_w;
    ratio.push_back(size_bias_ratio(h, m, theta, t));
    mean_m.push_back(weighted_mean_m(q, m, t));
  }
  out.size_bias_increasing = check_increasing(ratio);
  out.weighted_mean_decreasing = check_decreasing(mean_m);

  const auto wm = radial_w_moments(h, m, theta);
  out.centroid = wm.first.value / wm.mass.value;
  const auto rep = mean_variance(model);
  out.size_biased_mean = (rep.var_X + rep.mean * rep.mean) / rep.mean;
  out.centroid_ok = out.centroid >= out.size_biased_mean - 1e-8;
  out.holds = out.size_bias_increasing.holds && out.weighted_mean_decreasing.holds &&
              out.negative_w == 0 && out.centroid_ok;
  return out;
}

HessianReport hessian_constant(Shape m, int n) {
  if (n < 2) throw InvalidArgument("hessian_constant needs N >= 2");
  if (m.value() > 10 || n > 50) throw InvalidArgument("hessian_constant supports m <= 10, N <= 50");
  const double dn = n;
  // Density of the maximum of n unit-rate Erlang(m) variables.
  auto density = [&](double y) {
    if (y <= 0.0) return 0.0;
    return std::exp(std::log(dn) + (dn - 1.0) * erlang_cdf(m, y).log_value +
                    erlang_density(m, y).log_value);
  };
  auto a = [&](double y) { return y > 0.0 ? y * hazard_index(m, y) : 0.0; };

  const double b = solve_centering(std::max(dn, 1.5), m).b;
  double hz = std::max(b, static_cast<double>(m.value()));
  while (dn * erlang_survival(m, hz).value > 1e-18) hz *= 1.25;
  std::vector<double> pts{0.0};
  for (double f : {0.125, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0}) {
    if (f * b < hz) pts.push_back(f * b);
  }
  pts.push_back(hz);
  const QuadratureOptions opt{.rel_tol = 1e-13, .abs_tol = 0.0, .max_panels = 4000};

  const auto mean_y = integrate([&](double y) { return y * density(y); }, pts, opt);
  const auto mean_a = integrate([&](double y) { return a(y) * density(y); }, pts, opt);
  const double mu = mean_y.value;
  const auto cov =
      integrate([&](double y) { return (y - mu) * a(y) * density(y); }, pts, opt);
  if (!mean_y.converged || !mean_a.converged || !cov.converged) {
    throw QuadratureNonConvergence("hessian_constant quadrature did not converge");
  }
  HessianReport out{m, n, 0.0, cov.value, mean_a.value, 0.0};
  out.c = dn * dn * (2.0 * dn * cov.value - mean_a.value);
  out.abs_error = dn * dn * (2.0 * dn * (cov.abs_error + mean_y.abs_error * mean_a.value) +
                             mean_a.abs_error);
  return out;
}

RadialHessian hessian_from_radial(Shape m, int n, double step) {
  if (n < 2) throw InvalidArgument("hessian_from_radial needs N >= 2");
  std::vector<double> hv(static_cast<std::size_t>(n), 0.0);
  hv[0] = 1.0;
  hv[1] = -1.0;
  const RadialDirection h(hv);
  const double v0 = var_on_ray(h, m, 0.0);
  auto second = [&](double d) {
    return (var_on_ray(h, m, d) - 2.0 * v0 + var_on_ray(h, m, -d)) / (d * d) / 2.0;
  };
  RadialHessian out{};
  out.coarse = second(step);
  out.fine = second(0.5 * step);
  out.c = (4.0 * out.fine - out.coarse) / 3.0;
  return out;
}

BmReport monotone_bm_report(Shape m, const std::vector<double>& y_grid) {
  if (y_grid.size() < 2) throw InvalidArgument("monotone_bm_report needs at least 2 grid points");
  std::vector<double> b;
  for (double y : y_grid) {
    if (!(y > 0.0) || !std::isfinite(y)) throw InvalidArgument("grid points must be positive");
    b.push_back(hazard_index(m, y));
  }
  BmReport out{check_increasing(b), *std::min_element(b.begin(), b.end()),
               std::numeric_limits<double>::infinity(), false, false};
  for (std::size_t i = 0; i + 1 < b.size(); ++i) {
    out.min_slope = std::min(out.min_slope, (b[i + 1] - b[i]) / (y_grid[i + 1] - y_grid[i]));
  }
  out.above_one = out.min_value > 1.0;
  out.holds = out.increasing.holds && out.above_one;
  return out;
}

MassDecayReport cauchy_mass_decay_check(const ProbabilityVector& p, std::size_t trials,
                                        std::uint64_t seed, unsigned threads) {
  const auto sim = simulate_remaining_mass(p, trials, seed, threads);
  MassDecayReport out{{}, trials, seed, true};
  const double n = static_cast<double>(p.size());
  for (std::size_t r = 1; r <= p.size(); ++r) {
    MassDecayRow row{static_cast<int>(r), sim.mean[r - 1], sim.std_error[r - 1], r / n, false};
    // Absolute floor for deterministic paths.
    row.ok = row.mean <= row.bound + 3.0 * row.std_error + 1e-12;
    out.holds = out.holds && row.ok;
    out.rows.push_back(row);
  }
  return out;
}

}  // namespace dixie
