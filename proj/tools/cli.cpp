#include "cli.hpp"

#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dixie/asymptotics.hpp"
#include "dixie/centering.hpp"
#include "dixie/errors.hpp"
#include "dixie/exact_moments.hpp"
#include "dixie/extremality.hpp"
#include "dixie/montecarlo.hpp"
#include "dixie/quadrature.hpp"
#include "dixie/verify.hpp"
#include "render.hpp"

namespace dixie::cli {
namespace {

constexpr const char* kThreadsEnv = "DIXIE_THREADS";
constexpr double kInputSumTolerance = 1e-6;

// A finished command: its payload plus the exit code it implies.
struct Outcome {
  Json parameters = Json::object();
  Json results = Json::object();
  int code = kOk;
};

// Raised when a payload reports non-convergence; carries the payload.
struct NonConvergent {
  Outcome outcome;
};

struct ModelArgs {
  std::optional<std::size_t> n;
  int m = 1;
  bool uniform = false;
  std::vector<double> p;
  std::optional<double> powerlaw_alpha;
};

void add_model_options(CLI::App& cmd, ModelArgs& a) {
  cmd.add_option("--n", a.n, "number of coupon types")->check(CLI::PositiveNumber);
  cmd.add_option("--m", a.m, "copies needed of each type")->check(CLI::PositiveNumber);
  auto* u = cmd.add_flag("--uniform", a.uniform, "equal probabilities");
  auto* p = cmd.add_option("--p", a.p, "explicit probabilities, e.g. 0.5,0.3,0.2")->delimiter(',');
  auto* w = cmd.add_option("--powerlaw-alpha", a.powerlaw_alpha, "p_j proportional to j^-alpha")
                ->check(CLI::PositiveNumber);
  u->excludes(p)->excludes(w);
  p->excludes(w);
}

CollectorModel build_model(const ModelArgs& a, Json& params) {
  const Shape m(a.m);
  params["m"] = a.m;
  if (!a.p.empty()) {
    if (a.n && *a.n != a.p.size()) throw InvalidArgument("--n does not match the length of --p");
    auto p = ProbabilityVector::normalized(a.p, kInputSumTolerance);
    params["n"] = p.size();
    params["law"] = "explicit";
    params["p"] = std::vector<double>(p.values().begin(), p.values().end());
    return {m, std::move(p)};
  }
  if (!a.n) throw InvalidArgument("--n is required with --uniform or --powerlaw-alpha");
  params["n"] = *a.n;
  if (a.powerlaw_alpha) {
    params["law"] = "powerlaw";
    params["alpha"] = *a.powerlaw_alpha;
    return {m, ProbabilityVector::power_law(*a.n, *a.powerlaw_alpha)};
  }
  if (!a.uniform) throw InvalidArgument("choose one of --uniform, --p or --powerlaw-alpha");
  params["law"] = "uniform";
  return {m, ProbabilityVector::uniform(*a.n)};
}

struct GridArgs {
  std::vector<double> x;
  double lo;
  double hi;
  int points;
};

void add_grid_options(CLI::App& cmd, GridArgs& g) {
  cmd.add_option("--x", g.x, "explicit x values (overrides the range)")->delimiter(',');
  cmd.add_option("--x-min", g.lo, "grid start")->capture_default_str();
  cmd.add_option("--x-max", g.hi, "grid end")->capture_default_str();
  cmd.add_option("--points", g.points, "grid size")->check(CLI::Range(2, 100000))->capture_default_str();
}

std::vector<double> build_grid(const GridArgs& g, Json& params) {
  const auto grid = g.x.empty() ? linear_grid(g.lo, g.hi, g.points) : g.x;
  params["x"] = grid;
  return grid;
}

Json stats_json(const SampleStats& s) {
  return {{"mean", s.mean},
          {"variance", s.variance},
          {"std_error_mean", s.std_error_mean},
          {"std_error_variance", s.std_error_variance},
          {"trials", s.trials}};
}

// ---- commands ---------------------------------------------------------------

Outcome cmd_moments(const ModelArgs& a) {
  Outcome o;
  const auto model = build_model(a, o.parameters);
  const auto r = mean_variance(model);
  o.results = {{"mean", r.mean},
               {"rising2", r.rising2},
               {"var_T", r.var_T},
               {"var_X", r.var_X},
               {"method", std::string(to_string(r.method))},
               {"abs_err_estimate", r.abs_err_estimate},
               {"converged", r.converged},
               {"cancellation_warning", r.cancellation_warning},
               {"closed_form_var_T", r.closed_form_var_T ? Json(*r.closed_form_var_T) : Json()}};
  if (!r.converged) throw NonConvergent{o};
  return o;
}

Outcome cmd_centering(double n, int m, const GridArgs& g) {
  Outcome o;
  o.parameters = {{"count", n}, {"m", m}};
  const auto grid = build_grid(g, o.parameters);
  const auto r = quantile_inequality_report(n, Shape(m), grid);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"x", row.x}, {"ratio", row.ratio}, {"within_bound", row.within_bound}});
  }
  o.results = {{"b", r.pair.b},
               {"a", r.pair.a},
               {"clock_ratio", r.clock_ratio},
               {"right_tail_ok", r.right_tail_ok},
               {"rows", rows}};
  return o;
}

Outcome cmd_gumbel(double n, int m, const GridArgs& g) {
  Outcome o;
  o.parameters = {{"count", n}, {"m", m}};
  const auto grid = build_grid(g, o.parameters);
  const auto r = gumbel_fit_equal(n, Shape(m), grid);
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    rows.push_back({{"x", r.grid[i]},
                    {"exact_cdf", r.exact_cdf[i]},
                    {"gumbel_cdf", r.gumbel[i]},
                    {"difference", r.exact_cdf[i] - r.gumbel[i]}});
  }
  o.results = {{"b", r.b}, {"a", r.a}, {"sup_distance", r.sup_distance}, {"rows", rows}};
  return o;
}

Outcome cmd_radial(const std::vector<double>& h, int m, std::optional<double> theta_max, int steps) {
  Outcome o;
  const RadialDirection dir(h);
  o.parameters = {{"h", h},
                  {"m", m},
                  {"theta_max", theta_max ? Json(*theta_max) : Json(0.5 * dir.exit_theta())},
                  {"steps", steps}};
  const auto r = radial_variance_scan(dir, Shape(m), theta_max, steps);
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.thetas.size(); ++i) {
    rows.push_back(
        {{"theta", r.thetas[i]}, {"var_T", r.variances[i]}, {"abs_error", r.variance_errors[i]}});
  }
  Json checks = Json::array();
  for (const auto& c : r.w_checks) {
    checks.push_back({{"theta", c.theta},
                      {"w_integral", c.w_integral},
                      {"mean_derivative", c.mean_derivative},
                      {"rel_diff", c.rel_diff},
                      {"ok", c.ok}});
  }
  o.results = {{"verdict", r.verdict},
               {"violations", r.violations},
               {"exit_theta", dir.exit_theta()},
               {"rows", rows},
               {"w_checks", checks}};
  return o;
}

Outcome cmd_hessian(int m, int n) {
  Outcome o;
  o.parameters = {{"m", m}, {"bign", n}};
  const auto r = hessian_constant(Shape(m), n);
  o.results = {{"C", r.c},
               {"cov_term", r.cov_term},
               {"mean_term", r.mean_term},
               {"abs_error", r.abs_error},
               {"positive", r.c > 0.0}};
  // The finite-difference cross-check needs exact moments, so only small N.
  if (n <= 12) {
    const auto fd = hessian_from_radial(Shape(m), n);
    o.results["radial_C"] = fd.c;
    o.results["radial_rel_diff"] = std::abs(fd.c / r.c - 1.0);
  }
  return o;
}

Outcome cmd_case1(const std::string& family, int m, const std::vector<std::size_t>& ns,
                  std::size_t big_j) {
  Outcome o;
  o.parameters = {{"family", family}, {"m", m}, {"bign", ns}, {"truncation", big_j}};
  const auto fam = family == "quadratic" ? quadratic_family() : linear_family();
  const auto r = case1_limit(fam, Shape(m), ns, big_j);
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"n", row.n},
                    {"a_n", row.a_n},
                    {"scaled_moment_1", row.scaled_moment[0]},
                    {"scaled_moment_2", row.scaled_moment[1]},
                    {"gap_1", row.gap[0]},
                    {"gap_2", row.gap[1]},
                    {"relative_gap_1", row.relative_gap[0]},
                    {"relative_gap_2", row.relative_gap[1]},
                    {"kolmogorov", row.kolmogorov}});
  }
  o.results = {{"truncation_j", r.truncation_j},
               {"limit_moment_1", r.limit_moment[0]},
               {"limit_moment_2", r.limit_moment[1]},
               {"truncation_bound", r.truncation_bound},
               {"gaps_decreasing", r.gaps_decreasing},
               {"kolmogorov_decreasing", r.kolmogorov_decreasing},
               {"rows", rows}};
  return o;
}

Outcome cmd_case2(std::size_t n, double alpha, int m, const GridArgs& g) {
  Outcome o;
  o.parameters = {{"bign", n}, {"alpha", alpha}, {"m", m}};
  const auto grid = build_grid(g, o.parameters);
  const auto r = case2_powerlaw(n, alpha, Shape(m), grid);
  Json rows = Json::array();
  for (std::size_t i = 0; i < r.grid.size(); ++i) {
    rows.push_back({{"x", r.grid[i]},
                    {"defect_mass", r.mass[i]},
                    {"target", r.target[i]},
                    {"relative_error", r.relative_error[i]},
                    {"within_band", r.relative_error[i] <= 0.15},
                    {"atomless", r.atomless[i]},
                    {"max_q", r.max_q[i]},
                    {"exact_cdf", r.exact_cdf[i]},
                    {"gumbel_cdf", r.gumbel[i]}});
  }
  o.results = {{"a_n", r.scaling.a_n},
               {"rho", r.scaling.rho},
               {"c", r.scaling.c},
               {"b", r.scaling.b},
               {"sup_distance", r.sup_distance},
               {"band", 0.15},
               {"band_note", "engineering tolerance: no convergence rate is known for this limit"},
               {"rows", rows}};
  return o;
}

Outcome cmd_simulate(const ModelArgs& a, const std::string& mode, std::size_t trials,
                     std::uint64_t seed, unsigned threads) {
  Outcome o;
  const auto model = build_model(a, o.parameters);
  o.parameters["mode"] = mode;
  o.parameters["trials"] = trials;
  o.parameters["seed"] = seed;
  const SimConfig cfg{trials, seed, model, threads};
  if (mode == "discrete") {
    o.results = {{"T", stats_json(simulate_discrete(cfg))}};
  } else if (mode == "poissonized") {
    const auto r = transfer_check(cfg);
    o.results = {{"X", stats_json(r.poissonized)},
                 {"T", stats_json(r.discrete)},
                 {"var_T_from_X", r.var_t_from_x.value},
                 {"var_T_from_X_std_error", r.var_t_from_x.std_error},
                 {"exact_mean", r.exact_mean},
                 {"exact_var_T", r.exact_var_t},
                 {"z_mean", r.z_mean},
                 {"z_var_from_X", r.z_var_from_x},
                 {"z_var_discrete", r.z_var_discrete},
                 {"within_3sigma", r.within_3sigma}};
  } else {
    const auto r = simulate_active_clock(cfg);
    o.results = {{"psi_sum", stats_json(r.psi_sum)},
                 {"H", stats_json(r.hit_time)},
                 {"total", r.total},
                 {"std_error_total", r.std_error_total},
                 {"exact_var_T", r.exact_var_t},
                 {"z", r.z},
                 {"within_3sigma", r.within_3sigma}};
  }
  return o;
}

Outcome cmd_verify_all(bool quick, std::uint64_t seed, unsigned threads, std::ostream* live) {
  Outcome o;
  o.parameters = {{"quick", quick}, {"seed", seed}};
  Json criteria = Json::array();
  int passed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const auto r = run_criterion(id, {quick, seed, threads});
    Json metrics = Json::object();
    for (const auto& [k, v] : r.metrics) metrics[k] = v;
    criteria.push_back({{"id", r.id},
                        {"title", r.title},
                        {"passed", r.passed},
                        {"detail", r.detail},
                        {"metrics", metrics}});
    if (live) {
      *live << "criterion " << (r.id < 10 ? " " : "") << r.id << ' ' << (r.passed ? "PASS" : "FAIL")
            << "  " << r.title << ": " << r.detail << '\n';
      live->flush();
    }
    passed += r.passed;
  }
  o.results = {{"passed", passed},
               {"total", kCriterionCount},
               {"all_passed", passed == kCriterionCount},
               {"criteria", criteria}};
  o.code = passed == kCriterionCount ? kOk : kGateFailure;
  return o;
}

unsigned default_threads() {
  const char* env = std::getenv(kThreadsEnv);
  if (!env || !*env) return 0;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 0) {
    throw InvalidArgument(std::string(kThreadsEnv) + " must be a nonnegative integer");
  }
  return static_cast<unsigned>(v);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Numerical laboratory for the double Dixie cup problem", "dixie"};
  app.require_subcommand(1);
  bool json = false, csv = false;
  unsigned threads = 0;
  app.add_flag("--json", json, "emit the JSON report");
  app.add_flag("--csv", csv, "emit grid rows as CSV (radial, gumbel, case2)");
  app.add_option("--threads", threads, "worker threads; 0 uses every core");

  ModelArgs model_args, sim_args;
  auto* moments = app.add_subcommand("moments", "E T and Var T for a model");
  add_model_options(*moments, model_args);

  double count = 0.0;
  int m = 1;
  GridArgs centering_grid{{}, -3.0, 10.0, 27};
  auto* centering = app.add_subcommand("centering", "Gumbel centering b, a and quantile checks");
  centering->add_option("--count", count, "n (a positive real > 1)")->required();
  centering->add_option("--m", m, "copies needed")->check(CLI::PositiveNumber);
  add_grid_options(*centering, centering_grid);

  GridArgs gumbel_grid{{}, -3.0, 4.0, 141};
  auto* gumbel = app.add_subcommand("gumbel", "exact equal-probability CDF vs Gumbel");
  gumbel->add_option("--count", count, "n (a positive real > 1)")->required();
  gumbel->add_option("--m", m, "copies needed")->check(CLI::PositiveNumber);
  add_grid_options(*gumbel, gumbel_grid);

  std::vector<double> h;
  std::optional<double> theta_max;
  int steps = 16;
  auto* radial = app.add_subcommand("radial", "variance along a ray out of the uniform law");
  radial->set_help_flag("--help", "print this help message and exit");
  radial->add_option("--h", h, "direction, entries summing to zero")->delimiter(',')->required();
  radial->add_option("--m", m, "copies needed")->check(CLI::PositiveNumber);
  radial->add_option("--theta-max", theta_max, "scan end (default: half the exit theta)");
  radial->add_option("--steps", steps, "grid points")->check(CLI::Range(2, 10000))->capture_default_str();

  int bign = 2;
  auto* hessian = app.add_subcommand("hessian", "tangent Hessian constant C_{m,N}");
  hessian->add_option("--m", m, "copies needed")->check(CLI::Range(1, 10));
  hessian->add_option("--bign", bign, "N")->check(CLI::Range(2, 50))->required();

  std::string family = "linear";
  std::vector<std::size_t> ns{100, 200, 400};
  std::size_t truncation = 0;
  auto* case1 = app.add_subcommand("case1", "infinite-product limit, p_j = a_j / A_N");
  case1->add_option("--family", family, "rate family")
      ->check(CLI::IsMember({"linear", "quadratic"}))
      ->capture_default_str();
  case1->add_option("--m", m, "copies needed")->check(CLI::PositiveNumber);
  case1->add_option("--bign", ns, "list of N")->delimiter(',')->capture_default_str();
  case1->add_option("--truncation", truncation, "J (0: automatic)")->capture_default_str();

  std::size_t case2_n = 1000000;
  double alpha = 1.0;
  GridArgs case2_grid{{-1.0, 0.0, 1.0, 2.0}, -1.0, 2.0, 4};
  auto* case2 = app.add_subcommand("case2", "power-law defect mass and Gumbel comparison");
  case2->add_option("--bign", case2_n, "N")->check(CLI::Range(10, 100000000))->capture_default_str();
  case2->add_option("--alpha", alpha, "power-law exponent")->check(CLI::PositiveNumber)->capture_default_str();
  case2->add_option("--m", m, "copies needed")->check(CLI::PositiveNumber);
  add_grid_options(*case2, case2_grid);

  std::string mode = "discrete";
  std::size_t trials = 100000;
  std::uint64_t seed = 0;
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo");
  add_model_options(*simulate, sim_args);
  simulate->add_option("--mode", mode, "discrete | poissonized | active-clock")
      ->check(CLI::IsMember({"discrete", "poissonized", "active-clock"}))
      ->capture_default_str();
  simulate->add_option("--trials", trials, "trials")->check(CLI::PositiveNumber)->capture_default_str();
  simulate->add_option("--seed", seed, "seed")->capture_default_str();

  bool quick = false;
  auto* verify = app.add_subcommand("verify-all", "run every acceptance gate");
  verify->add_flag("--quick", quick, "reduced workloads");
  verify->add_option("--seed", seed, "seed")->capture_default_str();

  for (auto* sub : app.get_subcommands([](CLI::App*) { return true; })) sub->fallthrough();

  std::vector<std::string> args;
  for (int i = argc - 1; i >= 1; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, er;
    const int code = app.exit(e, o, er);
    out << o.str();
    err << er.str();
    return code == 0 ? kOk : kUsage;
  }

  auto* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  if (csv && name != "radial" && name != "gumbel" && name != "case2") {
    err << "error: --csv is only available for radial, gumbel and case2\n";
    return kUsage;
  }
  if (json && csv) {
    err << "error: --json and --csv are mutually exclusive\n";
    return kUsage;
  }

  Outcome outcome;
  try {
    if (app.count("--threads") == 0) threads = default_threads();
    if (name == "moments") {
      outcome = cmd_moments(model_args);
    } else if (name == "centering") {
      outcome = cmd_centering(count, m, centering_grid);
    } else if (name == "gumbel") {
      outcome = cmd_gumbel(count, m, gumbel_grid);
    } else if (name == "radial") {
      outcome = cmd_radial(h, m, theta_max, steps);
    } else if (name == "hessian") {
      outcome = cmd_hessian(m, bign);
    } else if (name == "case1") {
      outcome = cmd_case1(family, m, ns, truncation);
    } else if (name == "case2") {
      outcome = cmd_case2(case2_n, alpha, m, case2_grid);
    } else if (name == "simulate") {
      outcome = cmd_simulate(sim_args, mode, trials, seed, threads);
    } else {
      outcome = cmd_verify_all(quick, seed, threads, json ? nullptr : &err);
    }
  } catch (const NonConvergent& nc) {
    outcome = nc.outcome;
    outcome.code = kNonConvergence;
  } catch (const QuadratureNonConvergence& e) {
    outcome.results = {{"error", "non_convergence"}, {"message", e.what()}};
    outcome.code = kNonConvergence;
  } catch (const TruncationInsufficient& e) {
    outcome.results = {{"error", "truncation_insufficient"}, {"message", e.what()}};
    outcome.code = kNonConvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  if (name != "verify-all") outcome.parameters["threads"] = threads;

  const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
      std::chrono::steady_clock::now() - start);
  Json envelope = {{"command", name},
                   {"parameters", outcome.parameters},
                   {"results", outcome.results},
                   {"tool_version", DIXIE_VERSION},
                   {"elapsed_ms", elapsed.count()}};
  if (json) {
    out << envelope.dump(2) << '\n';
  } else if (csv) {
    if (!render_csv(envelope, out)) render_text(envelope, out);
  } else {
    render_text(envelope, out);
  }
  if (outcome.code == kNonConvergence) err << "error: numeric non-convergence\n";
  return outcome.code;
}

}  // namespace dixie::cli
