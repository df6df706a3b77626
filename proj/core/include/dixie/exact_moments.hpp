#pragma once

// Rising moments E[T (T+1) ... (T+r-1)] of the discrete completion time,
// equal to the ordinary moments E X^r of the Poissonized time, by two
// independent routes:
//   * finite inclusion-exclusion over coupon subsets (exact rational
//     formula, evaluated in floating point with a cancellation estimate);
//   * adaptive quadrature of r int t^{r-1} P(X > t) dt.

#include <optional>
#include <string_view>

#include "dixie/probability.hpp"

namespace dixie {

struct RisingMoment {
  double value = 0.0;
  double abs_error = 0.0;
  bool converged = true;
  bool cancellation_warning = false;  ///< estimated relative error > 1e-6
};

/// Largest (1+m)^N accepted by the subset enumeration.
inline constexpr double kExactTermGuard = 1e8;
inline constexpr int kMaxRisingOrder = 6;

[[nodiscard]] bool exact_within_guard(const CollectorModel& model);

/// Throws TooLarge beyond the guard and InvalidArgument for r outside 1..6.
RisingMoment rising_moment_exact(const CollectorModel& model, int r);

/// Adaptive quadrature with a certified analytic bound for the truncated
/// tail folded into abs_error. converged is false if the 1e-10 relative
/// target was not met.
RisingMoment rising_moment_quadrature(const CollectorModel& model, int r);

/// Mean and variance of X from integrals centred at the unit-defect time,
/// which avoids forming E X^2 - (E X)^2 for large N.
struct PoissonizedMoments {
  double mean;
  double variance;
  double mean_error;
  double variance_error;
  bool converged;
};
PoissonizedMoments poissonized_moments_quadrature(const CollectorModel& model);

enum class MomentMethod { exact_ie, quadrature, closed_form_uniform_m1 };
std::string_view to_string(MomentMethod method);

struct MomentReport {
  double mean = 0.0;     ///< E T
  double rising2 = 0.0;  ///< E T (T + 1)
  double var_T = 0.0;
  double var_X = 0.0;    ///< Var X = Var T + E T
  MomentMethod method = MomentMethod::exact_ie;
  double abs_err_estimate = 0.0;
  bool converged = true;
  bool cancellation_warning = false;
  /// N^2 H_N^{(2)} - N H_N, filled for the uniform m = 1 law.
  std::optional<double> closed_form_var_T;
};

struct MomentOptions {
  /// Above this many coupons the quadrature route is used.
  std::size_t exact_max_coupons = 12;
};

MomentReport mean_variance(const CollectorModel& model, MomentOptions options = {});

struct UniformM1 {
  double mean;   ///< N H_N
  double var_T;  ///< N^2 H_N^{(2)} - N H_N
};
UniformM1 uniform_m1_closed_form(std::size_t n);

}  // namespace dixie
