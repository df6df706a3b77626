#include "dixie/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/quadrature.hpp"

namespace dixie {
namespace {

constexpr double kNegligibleQ = 1e-300;

// Running Neumaier sum.
struct Accumulator {
  double sum = 0.0;
  double comp = 0.0;
  void add(double v) {
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
  }
  [[nodiscard]] double value() const { return sum + comp; }
};

// log F_m(y) and Q_m(y) from one survival evaluation where possible.
struct CdfTerm {
  double q;
  double log_f;
};
CdfTerm cdf_term(Shape m, double y) {
  if (y <= 0.0) return {1.0, -std::numeric_limits<double>::infinity()};
  const double q = erlang_survival(m, y).value;
  return {q, q < 0.5 ? std::log1p(-q) : erlang_cdf(m, y).log_value};
}

// sum_{lo < j <= hi} log F_m(a_j s); stops once Q underflows since a_j grows.
double log_partial_product(const RateFamily& fam, Shape m, double s, std::size_t lo,
                           std::size_t hi) {
  Accumulator acc;
  for (std::size_t j = lo + 1; j <= hi; ++j) {
    const auto term = cdf_term(m, fam.rate(j) * s);
    if (term.q < kNegligibleQ) break;
    acc.add(term.log_f);
  }
  return acc.value();
}

double partial_defect(const RateFamily& fam, Shape m, double s, std::size_t hi) {
  Accumulator acc;
  for (std::size_t j = 1; j <= hi; ++j) {
    const double q = erlang_survival(m, fam.rate(j) * s).value;
    if (q < kNegligibleQ) break;
    acc.add(q);
  }
  return acc.value();
}

// int_{s0}^inf r s^{r-1} sum_{j<=J} Q_m(a_j s) ds, closed form per term.
double head_moment_tail(const RateFamily& fam, Shape m, int r, double s0, std::size_t big_j) {
  Accumulator acc;
  for (std::size_t j = 1; j <= big_j; ++j) {
    const double a = fam.rate(j);
    const double v = r * std::pow(a, -r) * survival_moment_tail(m, r - 1, a * s0);
    if (v < kNegligibleQ) break;
    acc.add(v);
  }
  return acc.value();
}

// Built-in families use a(x) increasing with a'(x) >= 1, so
// sum_{j>J} g(a_j) <= int_{a_J}^inf g(a) da for decreasing g.
double builtin_tail(Shape m, double s, double a_j) {
  return survival_moment_tail(m, 0, a_j * s) / s;
}
double builtin_moment_tail(Shape m, int r, double s0, double a_j) {
  return r * std::pow(a_j, -r) * survival_moment_tail(m, r, a_j * s0) / s0;
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] < v[i])) return false;
  }
  return true;
}

}  // namespace

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

std::vector<double> default_gumbel_grid() { return linear_grid(-3.0, 4.0, 141); }

GumbelFitReport gumbel_fit_equal(double n, Shape m, const std::vector<double>& x_grid) {
  const auto pair = solve_centering(n, m);
  GumbelFitReport out{n, m, pair.b, pair.a, x_grid, {}, {}, 0.0};
  for (double x : x_grid) {
    const double y = pair.b + pair.a * x;
    const double exact = y <= 0.0 ? 0.0 : std::exp(n * erlang_cdf(m, y).log_value);
    out.exact_cdf.push_back(exact);
    out.gumbel.push_back(gumbel_cdf(x));
    out.sup_distance = std::max(out.sup_distance, std::abs(exact - out.gumbel.back()));
  }
  return out;
}

std::vector<MomentAsymptoticRow> equal_moment_asymptotics(Shape m,
                                                          const std::vector<std::size_t>& n_list) {
  constexpr double kGamma = std::numbers::egamma;
  constexpr double kZeta2 = std::numbers::pi * std::numbers::pi / 6.0;
  std::vector<MomentAsymptoticRow> rows;
  for (std::size_t n : n_list) {
    if (n < 10) throw InvalidArgument("equal_moment_asymptotics needs n >= 10");
    const double dn = static_cast<double>(n);
    MomentAsymptoticRow row{};
    row.n = n;
    if (m.value() == 1) {
      const auto cf = uniform_m1_closed_form(n);
      row.mean = cf.mean;
      row.var_t = cf.var_T;
      row.method = MomentMethod::closed_form_uniform_m1;
      row.converged = true;
    } else {
      const auto pm = poissonized_moments_quadrature({m, ProbabilityVector::uniform(n)});
      row.mean = pm.mean;
      row.var_t = pm.variance - pm.mean;
      row.method = MomentMethod::quadrature;
      row.converged = pm.converged;
    }
    const auto pair = solve_centering(dn, m);
    row.b = pair.b;
    row.a = pair.a;
    row.mean_prediction = dn * pair.b + kGamma * dn * pair.a;
    row.var_prediction = kZeta2 * dn * dn * pair.a * pair.a;
    row.mean_residual = std::abs(row.mean - row.mean_prediction) / (dn * pair.a);
    row.var_residual = std::abs(row.var_t / row.var_prediction - 1.0);
    const double expansion = dn * std::log(dn) + (m.value() - 1) * dn * std::log(std::log(dn)) +
                             dn * (kGamma - std::lgamma(m.value()));
    row.expansion_residual = std::abs(row.mean - expansion) / dn;
    rows.push_back(row);
  }
  return rows;
}

DefectMass terminal_defect_mass(const ProbabilityVector& p, Shape m, double t) {
  if (!(t > 0.0)) throw InvalidArgument("terminal_defect_mass needs t > 0");
  const auto groups = RateGroups::from(p);
  Accumulator mass, atomless;
  double max_q = 0.0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const double q = erlang_survival(m, groups.rate[g] * t).value;
    mass.add(groups.count[g] * q);
    atomless.add(groups.count[g] * q * q);
    max_q = std::max(max_q, q);
  }
  return {mass.value(), atomless.value(), max_q};
}

RateFamily linear_family() {
  return {"linear", [](std::size_t j) { return static_cast<double>(j); },
          [](Shape m, double s, std::size_t big_j) {
            return builtin_tail(m, s, static_cast<double>(big_j));
          },
          [](Shape m, int r, double s0, std::size_t big_j) {
            return builtin_moment_tail(m, r, s0, static_cast<double>(big_j));
          }};
}

RateFamily quadratic_family() {
  auto sq = [](std::size_t j) { return static_cast<double>(j) * static_cast<double>(j); };
  return {"quadratic", sq,
          [sq](Shape m, double s, std::size_t big_j) { return builtin_tail(m, s, sq(big_j)); },
          [sq](Shape m, int r, double s0, std::size_t big_j) {
            return builtin_moment_tail(m, r, s0, sq(big_j));
          }};
}

double case1_partial_cdf(const RateFamily& family, Shape m, double s, std::size_t big_j) {
  if (s <= 0.0) return 0.0;
  return std::exp(log_partial_product(family, m, s, 0, big_j));
}

CaseIReport case1_limit(const RateFamily& family, Shape m, const std::vector<std::size_t>& n_list,
                        std::size_t truncation_j) {
  if (n_list.empty()) throw InvalidArgument("case1_limit needs at least one N");
  const std::size_t max_n = *std::max_element(n_list.begin(), n_list.end());
  const std::size_t big_j = truncation_j ? truncation_j : std::max<std::size_t>(1000, 10 * max_n);
  if (big_j <= max_n) throw InvalidArgument("truncation J must exceed every N");

  // Location scale: defect sum equals one.
  double lo = 1.0 / family.rate(1), hi = lo;
  while (partial_defect(family, m, hi, big_j) > 1.0) hi *= 2.0;
  while (partial_defect(family, m, lo, big_j) < 1.0) lo *= 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (partial_defect(family, m, mid, big_j) > 1.0 ? lo : hi) = mid;
  }
  const double scale = hi;
  double horizon = scale;
  while (partial_defect(family, m, horizon, big_j) >= 1e-17) horizon *= 1.25;

  std::vector<double> pts{0.0};
  for (int k = -16; k <= 2; ++k) pts.push_back(std::ldexp(scale, k));
  pts.push_back(3.0 * scale);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::remove_if(pts.begin() + 1, pts.end(), [&](double s) { return s >= horizon; }),
            pts.end());
  pts.push_back(horizon);
  const QuadratureOptions opt{.rel_tol = 1e-11, .abs_tol = 0.0, .max_panels = 6000};

  auto log_g_j = [&](double s) { return log_partial_product(family, m, s, 0, big_j); };

  CaseIReport out{family.name, m, big_j, {0.0, 0.0}, 0.0, {}, true, true};
  for (int r = 1; r <= 2; ++r) {
    const auto q = integrate(
        [&](double s) {
          return s <= 0.0 ? 0.0 : r * std::pow(s, r - 1) * -std::expm1(log_g_j(s));
        },
        pts, opt);
    if (!q.converged) throw QuadratureNonConvergence("limit moment quadrature did not converge");
    out.limit_moment[r - 1] = q.value;
  }

  // Certified bound on the j > J remainder, on a log grid plus both ends.
  const double s_lo = std::ldexp(scale, -24);
  const auto grid = log_grid(s_lo, horizon, 50);
  double bound[2] = {0.0, 0.0};
  double kol_bound = std::exp(log_g_j(s_lo));
  for (int r = 1; r <= 2; ++r) {
    bound[r - 1] = r * std::pow(s_lo, r) * std::exp(log_g_j(s_lo)) +
                   family.moment_tail(m, r, horizon, big_j) +
                   head_moment_tail(family, m, r, horizon, big_j);
  }
  for (std::size_t k = 0; k + 1 < grid.size(); ++k) {
    const double piece = std::exp(log_g_j(grid[k + 1])) *
                         std::min(1.0, family.tail(m, grid[k], big_j));
    kol_bound = std::max(kol_bound, piece);
    for (int r = 1; r <= 2; ++r) {
      bound[r - 1] += r * std::pow(grid[k + 1], r - 1) * piece * (grid[k + 1] - grid[k]);
    }
  }
  kol_bound = std::max(kol_bound, std::min(1.0, family.tail(m, horizon, big_j)));
  out.truncation_bound = std::max({bound[0], bound[1], kol_bound});
  if (!(out.truncation_bound <= 1e-10)) {
    throw TruncationInsufficient("certified Case I truncation bound exceeds 1e-10");
  }

  std::vector<double> gaps[2], kols;
  for (std::size_t n : n_list) {
    CaseIRow row{};
    row.n = n;
    std::vector<double> rates(n);
    for (std::size_t j = 1; j <= n; ++j) rates[j - 1] = family.rate(j);
    row.a_n = compensated_sum(rates);
    const CollectorModel model{m, ProbabilityVector::from_weights(rates)};

    // G_N(s) (1 - prod_{N<j<=J} F(a_j s)): the limit CDF minus the finite one.
    auto excess = [&](double s) {
      if (s <= 0.0) return 0.0;
      const double head = log_partial_product(family, m, s, 0, n);
      if (head < -745.0) return 0.0;
      return std::exp(head) * -std::expm1(log_partial_product(family, m, s, n, big_j));
    };
    for (int r = 1; r <= 2; ++r) {
      const auto rm = rising_moment_quadrature(model, r);
      row.scaled_moment[r - 1] = rm.value / std::pow(row.a_n, r);
      const auto g = integrate([&](double s) { return r * std::pow(s, r - 1) * excess(s); }, pts,
                               opt);
      row.gap[r - 1] = g.value;
      row.relative_gap[r - 1] = g.value / out.limit_moment[r - 1];
      gaps[r - 1].push_back(g.value);
    }

    // Kolmogorov distance: grid maximum refined by golden section.
    const auto kgrid = log_grid(s_lo, horizon, 200);
    std::size_t best = 0;
    double best_val = -1.0;
    for (std::size_t k = 0; k < kgrid.size(); ++k) {
      const double v = excess(kgrid[k]);
      if (v > best_val) best_val = v, best = k;
    }
    double a = kgrid[best > 0 ? best - 1 : 0];
    double b = kgrid[std::min(best + 1, kgrid.size() - 1)];
    const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
    for (int it = 0; it < 100 && b - a > 1e-14 * b; ++it) {
      const double c = b - phi * (b - a), d = a + phi * (b - a);
      if (excess(c) > excess(d)) {
        b = d;
      } else {
        a = c;
      }
    }
    row.kolmogorov = std::max(best_val, excess(0.5 * (a + b)));
    kols.push_back(row.kolmogorov);
    out.rows.push_back(row);
  }
  out.gaps_decreasing = strictly_decreasing(gaps[0]) && strictly_decreasing(gaps[1]);
  out.kolmogorov_decreasing = strictly_decreasing(kols);
  return out;
}

PowerLawScaling powerlaw_scaling(std::size_t n, double alpha, Shape m) {
  if (n < 10) throw InvalidArgument("power-law scaling needs N >= 10");
  if (!(alpha > 0.0)) throw InvalidArgument("power-law exponent must be positive");
  Accumulator acc;
  for (std::size_t j = n; j >= 1; --j) acc.add(std::pow(static_cast<double>(j), -alpha));
  PowerLawScaling s{};
  const double dn = static_cast<double>(n);
  s.a_n = acc.value();
  s.rho = std::log(dn / alpha);
  s.c = s.a_n * std::pow(dn, alpha);
  s.b = s.c * (s.rho + (m.value() - 2) * std::log(s.rho) - std::lgamma(m.value()));
  return s;
}

DefectMassProfile case2_powerlaw(std::size_t n, double alpha, Shape m,
                                 const std::vector<double>& x_grid) {
  DefectMassProfile out{.n = n, .alpha = alpha, .m = m,
                        .scaling = powerlaw_scaling(n, alpha, m), .grid = x_grid};
  const double dn = static_cast<double>(n);
  const double l0 = out.scaling.rho + (m.value() - 2) * std::log(out.scaling.rho) -
                    std::lgamma(m.value());
  for (double x : x_grid) {
    // p_j (B_N + C_N x) = (N / j)^alpha L_N(x)
    const double l = l0 + x;
    Accumulator mass, atomless, log_cdf;
    for (std::size_t j = n; j >= 1; --j) {
      const auto term = cdf_term(m, std::pow(dn / static_cast<double>(j), alpha) * l);
      if (term.q < kNegligibleQ) break;
      mass.add(term.q);
      atomless.add(term.q * term.q);
      log_cdf.add(term.log_f);
    }
    const double target = std::exp(-x);
    out.mass.push_back(mass.value());
    out.target.push_back(target);
    out.relative_error.push_back(std::abs(mass.value() - target) / target);
    out.atomless.push_back(atomless.value());
    out.max_q.push_back(l > 0.0 ? erlang_survival(m, l).value : 1.0);
    out.exact_cdf.push_back(std::exp(log_cdf.value()));
    out.gumbel.push_back(gumbel_cdf(x));
    out.sup_distance = std::max(out.sup_distance, std::abs(out.exact_cdf.back() - out.gumbel.back()));
  }
  return out;
}

NormalizerCheck powerlaw_normalizer_check(std::size_t n, double alpha) {
  const auto s = powerlaw_scaling(n, alpha, Shape(1));
  const double dn = static_cast<double>(n);
  NormalizerCheck out{};
  out.a_n = s.a_n;
  if (alpha < 1.0) {
    out.asymptotic = std::pow(dn, 1.0 - alpha) / (1.0 - alpha);
  } else if (alpha == 1.0) {
    out.asymptotic = std::log(dn);
  } else {
    out.asymptotic = std::riemann_zeta(alpha);
  }
  out.rel_diff = std::abs(out.a_n / out.asymptotic - 1.0);
  out.ok = out.rel_diff <= 0.05;
  return out;
}

}  // namespace dixie
