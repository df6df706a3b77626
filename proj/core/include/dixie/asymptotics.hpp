#pragma once

// Limit-law checks: the equal-probability Gumbel law and its moment
// asymptotics, defect masses, the infinite-product regime (Case I) and the
// power-law endpoint regime (Case II).

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dixie/exact_moments.hpp"
#include "dixie/probability.hpp"

namespace dixie {

/// Standard Gumbel distribution function exp(-e^{-x}).
double gumbel_cdf(double x);

struct GumbelFitReport {
  double n;
  Shape m;
  double b;
  double a;
  std::vector<double> grid;
  std::vector<double> exact_cdf;   ///< (1 - Q_m(b + a x))^n
  std::vector<double> gumbel;      ///< exp(-e^{-x})
  double sup_distance;
};

/// 141 points on [-3, 4].
std::vector<double> default_gumbel_grid();

GumbelFitReport gumbel_fit_equal(double n, Shape m, const std::vector<double>& x_grid);

struct MomentAsymptoticRow {
  std::size_t n;
  double mean;
  double var_t;
  MomentMethod method;
  bool converged;
  double b;
  double a;
  double mean_prediction;   ///< n b + gamma n a
  double var_prediction;    ///< (pi^2/6) n^2 a^2
  double mean_residual;     ///< |E T - mean_prediction| / (n a)
  double var_residual;      ///< |Var T / var_prediction - 1|
  double expansion_residual;///< |E T - (n log n + (m-1) n log log n + n (gamma - log (m-1)!))| / n
};

/// Uniform law over n coupons for each n in the list.
std::vector<MomentAsymptoticRow> equal_moment_asymptotics(Shape m,
                                                          const std::vector<std::size_t>& n_list);

struct DefectMass {
  double mass;      ///< sum_j Q_m(p_j t)
  double atomless;  ///< sum_j Q_m(p_j t)^2
  double max_q;     ///< max_j Q_m(p_j t)
};
DefectMass terminal_defect_mass(const ProbabilityVector& p, Shape m, double t);

// ---- Case I --------------------------------------------------------------

/// Rate sequence a_1, a_2, ... with a certificate for the tail beyond J.
struct RateFamily {
  std::string name;
  std::function<double(std::size_t j)> rate;
  /// Bound on sum_{j>J} Q_m(a_j s), nonincreasing in s.
  std::function<double(Shape m, double s, std::size_t big_j)> tail;
  /// Bound on int_{s0}^inf r s^{r-1} sum_{j>J} Q_m(a_j s) ds.
  std::function<double(Shape m, int r, double s0, std::size_t big_j)> moment_tail;
};

/// a_j = j.
RateFamily linear_family();
/// a_j = j^2.
RateFamily quadratic_family();

/// P(sup_{j<=J} Y_j <= s), Y_j ~ Gamma(m, rate a_j).
double case1_partial_cdf(const RateFamily& family, Shape m, double s, std::size_t big_j);

struct CaseIRow {
  std::size_t n;
  double a_n;                 ///< sum_{j<=n} a_j
  double scaled_moment[2];    ///< E T^{(r)} / A_N^r by quadrature, r = 1, 2
  double gap[2];              ///< E Y^r - E T^{(r)} / A_N^r, integrated directly
  double relative_gap[2];
  double kolmogorov;          ///< sup_s |P(X_N / A_N <= s) - P(Y <= s)|
};

struct CaseIReport {
  std::string family;
  Shape m;
  std::size_t truncation_j;
  double limit_moment[2];     ///< E Y, E Y^2
  double truncation_bound;    ///< certified bound on the j > J contribution
  std::vector<CaseIRow> rows;
  bool gaps_decreasing;
  bool kolmogorov_decreasing;
};

/// truncation_j = 0 picks max(1000, 10 max N). Throws TruncationInsufficient
/// when the certified bound exceeds 1e-10.
CaseIReport case1_limit(const RateFamily& family, Shape m, const std::vector<std::size_t>& n_list,
                        std::size_t truncation_j = 0);

// ---- Case II -------------------------------------------------------------

struct PowerLawScaling {
  double a_n;  ///< sum_{j<=N} j^{-alpha}
  double rho;  ///< log(N / alpha)
  double c;    ///< A_N N^alpha
  double b;    ///< c (rho + (m-2) log rho - log (m-1)!)
};
PowerLawScaling powerlaw_scaling(std::size_t n, double alpha, Shape m);

struct DefectMassProfile {
  std::size_t n;
  double alpha;
  Shape m;
  PowerLawScaling scaling;
  std::vector<double> grid{};
  std::vector<double> mass{};            ///< M_N(x)
  std::vector<double> target{};          ///< e^{-x}
  std::vector<double> relative_error{};  ///< |M_N(x) - e^{-x}| / e^{-x}
  std::vector<double> atomless{};
  std::vector<double> max_q{};           ///< Q_m(L_N(x))
  std::vector<double> exact_cdf{};       ///< P(X <= B_N + C_N x)
  std::vector<double> gumbel{};
  double sup_distance = 0.0;
};

/// p_j proportional to j^{-alpha}, evaluated at t = B_N + C_N x.
DefectMassProfile case2_powerlaw(std::size_t n, double alpha, Shape m,
                                 const std::vector<double>& x_grid);

struct NormalizerCheck {
  double a_n;
  double asymptotic;  ///< N^{1-a}/(1-a), log N, or zeta(a)
  double rel_diff;
  bool ok;            ///< rel_diff <= 0.05
};
NormalizerCheck powerlaw_normalizer_check(std::size_t n, double alpha);

}  // namespace dixie
