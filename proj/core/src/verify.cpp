#include "dixie/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dixie/asymptotics.hpp"
#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/exact_moments.hpp"
#include "dixie/extremality.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/montecarlo.hpp"
#include "dixie/quadrature.hpp"
#include "dixie/rng.hpp"

namespace dixie {
namespace {

std::string fmt(const char* format, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Portable draws for building random test models (no std distributions,
// whose output differs between standard libraries).
class ModelSource {
 public:
  ModelSource(std::uint64_t seed, int criterion) : engine_(seed, 0x5eed0000u + criterion) {}

  std::size_t integer(std::size_t lo, std::size_t hi) {
    return lo + static_cast<std::size_t>(engine_() % (hi - lo + 1));
  }
  double unit() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }
  double normal() {
    // Box-Muller, one of the pair.
    return std::sqrt(-2.0 * std::log(unit())) * std::cos(2.0 * 3.141592653589793 * unit());
  }
  ProbabilityVector dirichlet(std::size_t n) {
    std::vector<double> w(n);
    for (double& v : w) v = -std::log(unit());
    return ProbabilityVector::from_weights(w);
  }
  RadialDirection direction(std::size_t n) {
    std::vector<double> h(n);
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = normal();
      s += h[i];
    }
    h.back() = -s;
    return RadialDirection(h);
  }

 private:
  PhiloxEngine engine_;
};

CriterionResult begin_result(int id, std::string title) {
  CriterionResult r;
  r.id = id;
  r.title = std::move(title);
  return r;
}

double rel_diff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(b), std::numeric_limits<double>::min());
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] < v[i])) return false;
  }
  return true;
}

bool strictly_increasing(const std::vector<double>& v) {
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    if (!(v[i + 1] > v[i])) return false;
  }
  return true;
}

CriterionResult triangle(const VerifyOptions& o) {
  auto r = begin_result(1, "exact/quadrature/Monte Carlo triangle");
  ModelSource src(o.seed, 1);
  const int models = o.quick ? 10 : 50;
  const std::size_t trials = o.quick ? 20000 : 100000;
  double worst_rel = 0.0, worst_z = 0.0;
  int failures = 0;
  for (int k = 0; k < models; ++k) {
    const std::size_t n = src.integer(1, 8);
    const Shape m(static_cast<int>(src.integer(1, 4)));
    const CollectorModel model{m, src.dirichlet(n)};
    double exact[2];
    bool ok = true;
    for (int order = 1; order <= 2; ++order) {
      const auto ex = rising_moment_exact(model, order);
      const auto qu = rising_moment_quadrature(model, order);
      exact[order - 1] = ex.value;
      const double rd = rel_diff(qu.value, ex.value);
      worst_rel = std::max(worst_rel, rd);
      ok = ok && rd <= 1e-7;
    }
    // Poissonized ordinary moments equal discrete rising moments.
    const auto xs = sample_poissonized({trials, o.seed + k, model, o.threads});
    std::vector<double> x2(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) x2[i] = xs[i] * xs[i];
    const auto s1 = SampleStats::from(xs), s2 = SampleStats::from(x2);
    const double z1 = (s1.mean - exact[0]) / s1.std_error_mean;
    const double z2 = (s2.mean - exact[1]) / s2.std_error_mean;
    worst_z = std::max({worst_z, std::abs(z1), std::abs(z2)});
    ok = ok && std::abs(z1) <= 3.0 && std::abs(z2) <= 3.0;
    if (!ok) ++failures;
  }
  r.passed = failures == 0;
  r.metrics = {{"models", models}, {"trials", static_cast<double>(trials)},
               {"max_rel_exact_vs_quadrature", worst_rel}, {"max_abs_z_mc", worst_z},
               {"failing_models", failures}};
  r.detail = fmt("%d models: max rel exact vs quadrature %.2e (tol 1e-7), max |z| MC %.2f (tol 3), "
                 "%d failing",
                 models, worst_rel, worst_z, failures);
  return r;
}

CriterionResult uniform_closed_form(const VerifyOptions&) {
  auto r = begin_result(2, "uniform m=1 closed form");
  double worst = 0.0;
  for (std::size_t n = 2; n <= 12; ++n) {
    const auto rep = mean_variance({Shape(1), ProbabilityVector::uniform(n)});
    worst = std::max(worst, rel_diff(rep.var_T, uniform_m1_closed_form(n).var_T));
  }
  const auto two = mean_variance({Shape(1), ProbabilityVector::uniform(2)});
  const bool anchor = std::abs(two.var_T - 2.0) <= 1e-12 && std::abs(two.mean - 3.0) <= 1e-12;
  r.passed = worst <= 1e-10 && anchor;
  r.metrics = {{"max_rel_diff", worst}, {"var_T_N2", two.var_T}, {"mean_N2", two.mean}};
  r.detail = fmt("N=2..12 max rel diff %.2e (tol 1e-10); N=2: E T=%.15g, Var T=%.15g (expect 3, 2)",
                 worst, two.mean, two.var_T);
  return r;
}

CriterionResult gumbel(const VerifyOptions&) {
  auto r = begin_result(3, "equal-probability Gumbel fit");
  bool ok = true;
  std::string detail;
  for (int m = 1; m <= 3; ++m) {
    std::vector<double> d;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      d.push_back(gumbel_fit_equal(n, Shape(m), default_gumbel_grid()).sup_distance);
    }
    const bool mono = strictly_decreasing(d);
    ok = ok && mono && d.back() < 0.01;
    r.metrics.emplace_back(fmt("sup_distance_m%d_n1e6", m), d.back());
    detail += fmt("%sm=%d: %.4f->%.4f->%.4f->%.4f%s", m > 1 ? "; " : "", m, d[0], d[1], d[2], d[3],
                  mono ? "" : " (not decreasing)");
  }
  r.passed = ok;
  r.detail = detail + " (tol 0.01 at n=1e6, strictly decreasing)";
  return r;
}

CriterionResult variance_asymptotic(const VerifyOptions& o) {
  auto r = begin_result(4, "variance asymptotic (pi^2/6) n^2 a_n^2");
  const auto m1 = equal_moment_asymptotics(Shape(1), {1000});
  bool ok = m1[0].var_residual < 0.01;
  std::string detail = fmt("m=1 n=1e3 residual %.4f (tol 0.01)", m1[0].var_residual);
  r.metrics.emplace_back("m1_var_residual", m1[0].var_residual);
  const std::vector<std::size_t> ns =
      o.quick ? std::vector<std::size_t>{1000, 10000} : std::vector<std::size_t>{1000, 10000, 100000};
  for (int m : {2, 3}) {
    const auto rows = equal_moment_asymptotics(Shape(m), ns);
    std::vector<double> vr, mr;
    bool conv = true;
    for (const auto& row : rows) {
      vr.push_back(row.var_residual);
      mr.push_back(row.mean_residual);
      conv = conv && row.converged;
    }
    const bool mono = strictly_decreasing(vr) && strictly_decreasing(mr);
    ok = ok && mono && conv;
    detail += fmt("; m=%d var residual", m);
    for (double v : vr) detail += fmt(" %.4f", v);
    detail += mono ? "" : " (not decreasing)";
    r.metrics.emplace_back(fmt("m%d_var_residual_last", m), vr.back());
    r.metrics.emplace_back(fmt("m%d_mean_residual_last", m), mr.back());
  }
  r.passed = ok;
  r.detail = detail;
  return r;
}

CriterionResult radial(const VerifyOptions& o) {
  auto r = begin_result(5, "radial variance extremality");
  ModelSource src(o.seed, 5);
  const int rays = o.quick ? 10 : 50;
  std::size_t violations = 0;
  int failing = 0;
  for (int k = 0; k < rays; ++k) {
    const auto h = src.direction(src.integer(2, 6));
    const Shape m(static_cast<int>(src.integer(1, 4)));
    const auto scan = radial_variance_scan(h, m);
    violations += scan.violations;
    if (!scan.verdict) ++failing;
  }
  r.passed = violations == 0;
  r.metrics = {{"rays", rays}, {"violations", static_cast<double>(violations)},
               {"failing_rays", failing}};
  r.detail = fmt("%d rays, %zu monotonicity violations, %d failing rays (tol 0)", rays, violations,
                 failing);
  return r;
}

CriterionResult hessian(const VerifyOptions&) {
  auto r = begin_result(6, "Hessian constant positivity");
  int cells = 0, nonpositive = 0;
  double min_c = std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 5; ++m) {
    for (int n = 2; n <= 8; ++n) {
      const double c = hessian_constant(Shape(m), n).c;
      ++cells;
      min_c = std::min(min_c, c);
      if (!(c > 0.0)) ++nonpositive;
    }
  }
  const double c12 = hessian_constant(Shape(1), 2).c;
  const double fd = hessian_from_radial(Shape(1), 2).c;
  const double rel_oracle = std::abs(c12 / 80.0 - 1.0);
  const double rel_fd = std::abs(fd / c12 - 1.0);
  r.passed = nonpositive == 0 && rel_oracle <= 1e-3 && rel_fd <= 1e-2;
  r.metrics = {{"cells", cells},       {"min_C", min_c},        {"C_1_2", c12},
               {"C_1_2_radial", fd},   {"rel_vs_80", rel_oracle}, {"rel_vs_radial", rel_fd}};
  r.detail = fmt("%d cells, min C %.4g (need > 0); C_{1,2}=%.6f vs 80 rel %.1e (tol 1e-3), "
                 "radial %.6f rel %.1e (tol 1e-2)",
                 cells, min_c, c12, rel_oracle, fd, rel_fd);
  return r;
}

CriterionResult active_clock(const VerifyOptions& o) {
  auto r = begin_result(7, "active-clock variance identity");
  ModelSource src(o.seed, 7);
  const int models = o.quick ? 5 : 20;
  const std::size_t trials = o.quick ? 20000 : 100000;
  double worst_z = 0.0;
  int failing = 0;
  for (int k = 0; k < models; ++k) {
    const std::size_t n = src.integer(1, 6);
    const Shape m(static_cast<int>(src.integer(1, 3)));
    const auto rep = simulate_active_clock({trials, o.seed + k, {m, src.dirichlet(n)}, o.threads});
    worst_z = std::max(worst_z, std::abs(rep.z));
    if (!rep.within_3sigma) ++failing;
  }
  const auto two =
      simulate_active_clock({1000, o.seed, {Shape(1), ProbabilityVector::uniform(2)}, o.threads});
  const bool exact_case = two.psi_sum.mean == 2.0 && two.psi_sum.variance == 0.0 &&
                          two.hit_time.variance == 0.0;
  r.passed = failing == 0 && exact_case;
  r.metrics = {{"models", models}, {"trials", static_cast<double>(trials)},
               {"max_abs_z", worst_z}, {"failing_models", failing},
               {"uniform2_psi_sum", two.psi_sum.mean}, {"uniform2_var_H", two.hit_time.variance}};
  r.detail = fmt("%d models x %zu trials: max |z| %.2f (tol 3), %d failing; N=2 uniform: "
                 "sum psi=%g, Var H=%g (expect 2, 0)",
                 models, trials, worst_z, failing, two.psi_sum.mean, two.hit_time.variance);
  return r;
}

CriterionResult mlr(const VerifyOptions& o) {
  auto r = begin_result(8, "MLR / size-bias properties");
  ModelSource src(o.seed, 8);
  const int cases = o.quick ? 5 : 20;
  int failing = 0;
  std::size_t negative_w = 0;
  double worst_centroid_margin = std::numeric_limits<double>::infinity();
  for (int k = 0; k < cases; ++k) {
    const auto h = src.direction(src.integer(2, 6));
    const Shape m(static_cast<int>(src.integer(1, 4)));
    const auto rep = mlr_report(h, m, 0.5 * h.exit_theta());
    negative_w += rep.negative_w;
    worst_centroid_margin = std::min(worst_centroid_margin, rep.centroid - rep.size_biased_mean);
    if (!rep.holds) ++failing;
  }
  r.passed = failing == 0;
  r.metrics = {{"cases", cases}, {"failing", failing},
               {"negative_w_points", static_cast<double>(negative_w)},
               {"min_centroid_margin", worst_centroid_margin}};
  r.detail = fmt("%d random q: %d failing, %zu negative w points, min centroid - E X^2/E X = %.4g "
                 "(tol -1e-8)",
                 cases, failing, negative_w, worst_centroid_margin);
  return r;
}

CriterionResult reverse_hazard(const VerifyOptions&) {
  auto r = begin_result(9, "reverse-hazard log-concavity suite");
  const auto grid = log_grid(1e-3, 1e3);
  std::size_t failures = 0;
  double max_e = -std::numeric_limits<double>::infinity();
  for (int m = 1; m <= 10; ++m) {
    const Shape s(m);
    std::vector<double> e;
    for (double y : grid) {
      e.push_back(log_elasticity(s, y));
      max_e = std::max(max_e, e.back());
    }
    if (!(*std::max_element(e.begin(), e.end()) < 0.0)) ++failures;
    if (!check_decreasing(e).holds) ++failures;
    for (double c : {1.5, 2.0, 5.0}) {
      std::vector<double> ratio;
      for (double y : grid) ratio.push_back(log_reverse_hazard(s, c * y) - log_reverse_hazard(s, y));
      if (!check_decreasing(ratio).holds) ++failures;
    }
  }
  r.passed = failures == 0;
  r.metrics = {{"grid_points", static_cast<double>(grid.size())},
               {"failed_checks", static_cast<double>(failures)}, {"max_e", max_e}};
  r.detail = fmt("m=1..10, %zu grid points: max e(y) %.3g (need < 0), %zu failed monotonicity checks",
                 grid.size(), max_e, failures);
  return r;
}

CriterionResult case2(const VerifyOptions& o) {
  auto r = begin_result(10, "Case II power-law defect mass");
  const std::vector<double> xs{-1.0, 0.0, 1.0, 2.0};
  const std::vector<std::size_t> ns = o.quick ? std::vector<std::size_t>{10000, 100000}
                                              : std::vector<std::size_t>{10000, 100000, 1000000};
  int band_fail = 0, mono_fail = 0;
  double worst_err = 0.0, worst_atomless = 0.0;
  std::string failing;
  for (double alpha : {0.5, 1.0, 2.0}) {
    for (int m : {1, 2}) {
      std::vector<DefectMassProfile> profiles;
      for (std::size_t n : ns) profiles.push_back(case2_powerlaw(n, alpha, Shape(m), xs));
      const auto& last = profiles.back();
      for (std::size_t i = 0; i < xs.size(); ++i) {
        std::vector<double> err;
        for (const auto& p : profiles) err.push_back(p.relative_error[i]);
        const bool band = err.back() <= 0.15;
        const bool mono = strictly_decreasing(err);
        worst_err = std::max(worst_err, err.back());
        if (!band) ++band_fail;
        if (!mono) ++mono_fail;
        if (!band || !mono) {
          failing += fmt(" (a=%g,m=%d,x=%g:", alpha, m, xs[i]);
          for (double e : err) failing += fmt(" %.4f", e);
          failing += ")";
        }
        worst_atomless = std::max(worst_atomless, last.atomless[i]);
      }
    }
  }
  r.passed = band_fail == 0 && mono_fail == 0 && worst_atomless < 1e-3;
  r.metrics = {{"max_rel_error", worst_err}, {"band_failures", band_fail},
               {"monotone_failures", mono_fail}, {"max_atomless", worst_atomless}};
  r.detail = fmt("max rel error %.4f at N=%zu (tol 0.15), %d band / %d monotone failures, "
                 "max atomless %.2e (tol 1e-3)",
                 worst_err, ns.back(), band_fail, mono_fail, worst_atomless) +
             (failing.empty() ? "" : "; failing cells:" + failing);
  return r;
}

CriterionResult case1(const VerifyOptions&) {
  auto r = begin_result(11, "Case I infinite-product limit");
  const auto rep = case1_limit(linear_family(), Shape(1), {100, 200, 400});
  std::string gaps;
  for (const auto& row : rep.rows) {
    gaps += fmt(" N=%zu: gap1 %.3e gap2 %.3e KS %.3e;", row.n, row.gap[0], row.gap[1], row.kolmogorov);
  }
  r.passed = rep.gaps_decreasing && rep.kolmogorov_decreasing;
  r.metrics = {{"EY", rep.limit_moment[0]}, {"EY2", rep.limit_moment[1]},
               {"truncation_bound", rep.truncation_bound},
               {"gap1_N400", rep.rows.back().gap[0]}, {"ks_N400", rep.rows.back().kolmogorov}};
  r.detail = fmt("E Y=%.10f E Y^2=%.10f;", rep.limit_moment[0], rep.limit_moment[1]) + gaps +
             fmt(" truncation bound %.1e; gaps %s, KS %s", rep.truncation_bound,
                 rep.gaps_decreasing ? "decreasing" : "NOT decreasing",
                 rep.kolmogorov_decreasing ? "decreasing" : "NOT decreasing");
  return r;
}

CriterionResult quantile(const VerifyOptions&) {
  auto r = begin_result(12, "gamma quantile inequalities");
  const auto xs = linear_grid(0.0, 10.0, 101);
  int tail_fail = 0, clock_fail = 0;
  double worst_ratio = 0.0;
  for (int m = 1; m <= 10; ++m) {
    for (double n : {1e3, 1e6}) {
      const auto rep = quantile_inequality_report(n, Shape(m), xs);
      if (!rep.right_tail_ok) ++tail_fail;
      for (const auto& row : rep.rows) worst_ratio = std::max(worst_ratio, row.ratio);
    }
    std::vector<double> clock;
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      clock.push_back(quantile_inequality_report(n, Shape(m), {}).clock_ratio);
    }
    if (!strictly_increasing(clock)) ++clock_fail;
  }
  r.passed = tail_fail == 0 && clock_fail == 0;
  r.metrics = {{"max_ratio", worst_ratio}, {"tail_failures", tail_fail},
               {"clock_failures", clock_fail}};
  r.detail = fmt("m=1..10, n in {1e3,1e6}, x in [0,10]: max n Q/e^{-x} = %.12f (tol 1+1e-10), "
                 "%d tail / %d clock-ratio failures",
                 worst_ratio, tail_fail, clock_fail);
  return r;
}

}  // namespace

CriterionResult run_criterion(int id, const VerifyOptions& options) {
  using Fn = CriterionResult (*)(const VerifyOptions&);
  static constexpr Fn table[kCriterionCount] = {
      triangle, uniform_closed_form, gumbel, variance_asymptotic, radial, hessian,
      active_clock, mlr, reverse_hazard, case2, case1, quantile};
  if (id < 1 || id > kCriterionCount) throw InvalidArgument("criterion id out of range");
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r;
  try {
    r = table[id - 1](options);
  } catch (const Error& e) {
    r.id = id;
    r.title = "criterion " + std::to_string(id);
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<CriterionResult> run_all_criteria(const VerifyOptions& options) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
  return out;
}

}  // namespace dixie
