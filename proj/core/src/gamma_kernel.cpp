#include "dixie/gamma_kernel.hpp"

#include <cmath>
#include <limits>

#include "dixie/errors.hpp"

namespace dixie {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Above this the tail series D_m is replaced by closed forms.
constexpr double kSeriesReach = 40.0;

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

// log sum_{j<m} x^j / j!, with rescaling so large x and m cannot overflow.
double log_partial_exp_sum(int m, double x) {
  double log_scale = 0.0;
  double term = 1.0;
  double sum = 1.0;
  for (int j = 1; j < m; ++j) {
    term *= x / j;
    sum += term;
    if (sum > 1e280) {
      term /= sum;
      log_scale += std::log(sum);
      sum = 1.0;
    }
  }
  return log_scale + std::log(sum);
}

// Modified Lentz evaluation of the continued fraction for Gamma(m, x),
// returning log Q_m(x). Converges quickly for x > m + 1.
double log_survival_continued_fraction(int m, double x) {
  constexpr double tiny = 1e-300;
  const double a = m;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return -x + a * std::log(x) - std::lgamma(a) + std::log(h);
}

double log_density(int m, double x) {
  return -x + (m - 1) * std::log(x) - log_factorial(m - 1);
}

void require_nonnegative(double x, const char* what) {
  if (!(x >= 0.0)) throw InvalidArgument(std::string(what) + " requires a nonnegative argument");
}

void require_positive(double x, const char* what) {
  if (!(x > 0.0)) throw InvalidArgument(std::string(what) + " requires a positive argument");
}

}  // namespace

namespace detail {

TailSeries tail_series(int m, double y) {
  // t_0 = 1, t_k = t_{k-1} * y / (m + k); stop once past the peak and the
  // next term is negligible against the running sum.
  double term = 1.0;
  double excess = 0.0;
  double moment = 0.0;
  for (int k = 1; k < 100000; ++k) {
    term *= y / (m + k);
    excess += term;
    moment += k * term;
    if (y < m + k && term < 1e-18 * (1.0 + excess)) break;
  }
  return {excess, moment};
}

}  // namespace detail

KernelValue erlang_survival(Shape shape, double x) {
  require_nonnegative(x, "erlang_survival");
  const int m = shape.value();
  if (x == 0.0) return {1.0, 0.0};
  double log_q;
  if (x <= m + 10.0 * std::sqrt(static_cast<double>(m))) {
    log_q = -x + log_partial_exp_sum(m, x);
  } else {
    log_q = log_survival_continued_fraction(m, x);
  }
  if (log_q > 0.0) log_q = 0.0;
  return {std::exp(log_q), log_q};
}

KernelValue erlang_density(Shape shape, double x) {
  require_nonnegative(x, "erlang_density");
  const int m = shape.value();
  if (x == 0.0) return m == 1 ? KernelValue{1.0, 0.0} : KernelValue{0.0, kNegInf};
  const double lf = log_density(m, x);
  return {std::exp(lf), lf};
}

KernelValue erlang_cdf(Shape shape, double y) {
  require_nonnegative(y, "erlang_cdf");
  const int m = shape.value();
  if (y == 0.0) return {0.0, kNegInf};
  if (y < m) {
    const auto series = detail::tail_series(m, y);
    const double lf = -y + m * std::log(y) - log_factorial(m) + std::log1p(series.excess);
    return {std::exp(lf), lf};
  }
  const double q = erlang_survival(shape, y).value;
  return {1.0 - q, std::log1p(-q)};
}

double upper_hazard(Shape shape, double t) {
  require_positive(t, "upper_hazard");
  const int m = shape.value();
  if (t >= m - 1) {
    // Q_m / f_m = sum_{i<m} (m-1)!/(m-1-i)! t^{-i}; terms are nonincreasing.
    double term = 1.0;
    double ratio = 1.0;
    for (int i = 1; i < m; ++i) {
      term *= (m - i) / t;
      ratio += term;
    }
    return 1.0 / ratio;
  }
  return std::exp(log_density(m, t) - erlang_survival(shape, t).log_value);
}

double log_reverse_hazard(Shape shape, double y) {
  require_positive(y, "reverse_hazard");
  const int m = shape.value();
  if (y < m) {
    const auto series = detail::tail_series(m, y);
    return std::log(static_cast<double>(m)) - std::log(y) - std::log1p(series.excess);
  }
  return log_density(m, y) - erlang_cdf(shape, y).log_value;
}

double reverse_hazard(Shape m, double y) { return std::exp(log_reverse_hazard(m, y)); }

double log_elasticity(Shape shape, double y) {
  require_positive(y, "log_elasticity");
  const int m = shape.value();
  if (y < m + kSeriesReach) {
    const auto series = detail::tail_series(m, y);
    return -1.0 - series.first_moment / (1.0 + series.excess);
  }
  return (m - 1) - y - y * reverse_hazard(shape, y);
}

double hazard_index(Shape shape, double y) {
  require_positive(y, "hazard_index");
  const int m = shape.value();
  if (y < m + kSeriesReach) {
    // y phi(y) = m / S(y), so b = 1 + y - m (S - 1) / S.
    const auto series = detail::tail_series(m, y);
    return 1.0 + y - m * series.excess / (1.0 + series.excess);
  }
  return y * reverse_hazard(shape, y) + y - (m - 1);
}

double survival_moment_tail(Shape shape, int k, double x) {
  require_nonnegative(x, "survival_moment_tail");
  if (k < 0) throw InvalidArgument("survival_moment_tail needs k >= 0");
  const int m = shape.value();
  double total = 0.0;
  for (int a = 0; a < m; ++a) {
    const double log_coef = log_factorial(a + k) - log_factorial(a);
    const auto q = erlang_survival(Shape(a + k + 1), x);
    total += std::exp(log_coef + q.log_value);
  }
  return total;
}

}  // namespace dixie
