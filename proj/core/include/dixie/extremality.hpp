#pragma once

// Checks around the uniform law's variance minimality: variance profiles
// along rays out of the uniform law, the tangent Hessian constant C_{m,N},
// the monotone-likelihood-ratio facts behind the radial argument, and the
// b_m monotonicity used for the Hessian sign.

#include <cstdint>
#include <optional>
#include <vector>

#include "dixie/montecarlo.hpp"
#include "dixie/poissonized.hpp"
#include "dixie/quadrature.hpp"

namespace dixie {

struct WIntegralCheck {
  double theta;
  double w_integral;       ///< int_0^inf w_theta(t) dt
  double mean_derivative;  ///< d E X / d theta by central differences
  double rel_diff;
  bool ok;                 ///< rel_diff <= 1e-5
};

struct RadialScanResult {
  RadialDirection direction;
  Shape m;
  std::vector<double> thetas;
  std::vector<double> variances;  ///< Var T along the ray
  std::vector<double> variance_errors;
  std::vector<WIntegralCheck> w_checks;
  std::size_t violations = 0;
  bool verdict = false;  ///< strictly increasing beyond tolerance at every step
};

/// Var T on `steps` equally spaced thetas in [0, theta_max]; theta_max
/// defaults to half the exit theta.
RadialScanResult radial_variance_scan(const RadialDirection& h, Shape m,
                                      std::optional<double> theta_max = std::nullopt,
                                      int steps = 16);

/// int_0^inf w_theta(t) dt and int_0^inf t w_theta(t) dt.
struct WMoments {
  QuadratureResult mass;
  QuadratureResult first;
};
WMoments radial_w_moments(const RadialDirection& h, Shape m, double theta);

struct MlrReport {
  MonotoneCheck size_bias_increasing;
  MonotoneCheck weighted_mean_decreasing;
  std::size_t negative_w = 0;
  double min_w = 0.0;
  double centroid = 0.0;             ///< int t w / int w
  double size_biased_mean = 0.0;     ///< E X^2 / E X
  bool centroid_ok = false;          ///< centroid >= size_biased_mean - 1e-8
  bool holds = false;
};
/// Evaluated on a log grid [1e-2, 1e2] times the unit-defect time.
MlrReport mlr_report(const RadialDirection& h, Shape m, double theta, int per_decade = 200);

struct HessianReport {
  Shape m;
  int n;
  double c;         ///< C_{m,N}
  double cov_term;  ///< Cov(Y_N, a_m(Y_N))
  double mean_term; ///< E a_m(Y_N)
  double abs_error;
};
/// C_{m,N} = N^2 (2N Cov(Y, a(Y)) - E a(Y)), Y with density N F^{N-1} f and
/// a(y) = y b_m(y).
HessianReport hessian_constant(Shape m, int n);

struct RadialHessian {
  double c;       ///< Richardson-extrapolated
  double coarse;  ///< second difference at step
  double fine;    ///< second difference at step / 2
};
/// Var T'' along h = (1, -1, 0, ...) at theta = 0, divided by |h|^2.
RadialHessian hessian_from_radial(Shape m, int n, double step = 1e-2);

struct BmReport {
  MonotoneCheck increasing;
  double min_value;
  double min_slope;
  bool above_one;
  bool holds;
};
BmReport monotone_bm_report(Shape m, const std::vector<double>& y_grid);

struct MassDecayRow {
  int r;
  double mean;
  double std_error;
  double bound;  ///< r / N
  bool ok;       ///< mean <= bound + 3 std_error
};
struct MassDecayReport {
  std::vector<MassDecayRow> rows;
  std::size_t trials;
  std::uint64_t seed;
  bool holds;
};
/// m = 1: E R_r <= r / N along the useful-hit chain.
MassDecayReport cauchy_mass_decay_check(const ProbabilityVector& p, std::size_t trials,
                                        std::uint64_t seed, unsigned threads = 0);

}  // namespace dixie
