#pragma once

// Erlang (integer-shape gamma) tail kernels.
//
// Q_m(x) = e^{-x} sum_{j<m} x^j / j!   upper tail of Gamma(m, 1)
// f_m(x) = e^{-x} x^{m-1} / (m-1)!     density
// F_m(y) = 1 - Q_m(y)                  distribution function
//
// Every evaluator returns a log-scale value alongside the natural one so that
// products over many coupons and extreme tails can be formed without
// underflow.

#include "dixie/probability.hpp"

namespace dixie {

struct KernelValue {
  double value;
  double log_value;  ///< -inf when value == 0
};

KernelValue erlang_survival(Shape m, double x);
KernelValue erlang_density(Shape m, double x);
/// Uses the lower-tail power series for y < m, never 1 - Q_m there.
KernelValue erlang_cdf(Shape m, double y);

/// h_m(t) = f_m(t) / Q_m(t), t > 0.
double upper_hazard(Shape m, double t);
/// phi_m(y) = f_m(y) / F_m(y), y > 0.
double reverse_hazard(Shape m, double y);
double log_reverse_hazard(Shape m, double y);
/// e(y) = d log phi / d log y = m - 1 - y D_m'(y) / D_m(y).
double log_elasticity(Shape m, double y);
/// b_m(y) = y phi(y) + y - (m - 1).
double hazard_index(Shape m, double y);

/// int_x^inf u^k Q_m(u) du = sum_{a<m} (a+k)!/a! Q_{a+k+1}(x).
double survival_moment_tail(Shape m, int k, double x);

namespace detail {

/// Lower series S(y) = sum_{k>=0} y^k m! / (m+k)! split as 1 + excess, with
/// the first moment sum_k k y^k m!/(m+k)!. D_m(y) = y^m / m! * S(y).
struct TailSeries {
  double excess;
  double first_moment;
};
TailSeries tail_series(int m, double y);

}  // namespace detail

}  // namespace dixie
