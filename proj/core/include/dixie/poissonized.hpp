#pragma once

// Poissonized completion time X: coupon j arrives at rate p_j, so
//   P(X <= t) = prod_j F_m(p_j t).
// Equal probabilities are grouped, so a uniform law over 10^6 coupons costs
// one kernel evaluation per time point.

#include <vector>

#include "dixie/probability.hpp"

namespace dixie {

class PoissonizedLaw {
 public:
  explicit PoissonizedLaw(const CollectorModel& model);

  [[nodiscard]] Shape shape() const noexcept { return m_; }
  [[nodiscard]] const RateGroups& groups() const noexcept { return groups_; }

  [[nodiscard]] double log_cdf(double t) const;
  [[nodiscard]] double cdf(double t) const;
  /// 1 - cdf, formed as -expm1(log cdf).
  [[nodiscard]] double survival(double t) const;
  [[nodiscard]] double density(double t) const;
  /// Expected number of coupons short of m copies: sum_j Q_m(p_j t).
  [[nodiscard]] double defect_mass(double t) const;

  /// Time at which the defect mass equals one; the natural location scale.
  [[nodiscard]] double unit_defect_time() const;
  /// Smallest doubling of unit_defect_time() with defect mass below `level`.
  [[nodiscard]] double horizon(double level = 1e-17) const;

 private:
  Shape m_;
  RateGroups groups_;
};

double completion_cdf(const CollectorModel& model, double t);
double completion_density(const CollectorModel& model, double t);

/// Direction h (sum zero, nonzero) of a ray p(theta) = u + theta h out of
/// the uniform law.
class RadialDirection {
 public:
  explicit RadialDirection(std::vector<double> h);

  [[nodiscard]] std::size_t size() const noexcept { return h_.size(); }
  [[nodiscard]] const std::vector<double>& components() const noexcept { return h_; }
  /// Largest theta keeping u + theta h strictly positive (inf if none).
  [[nodiscard]] double exit_theta() const;
  /// u + theta h; throws DomainExit unless every entry is positive.
  [[nodiscard]] ProbabilityVector at(double theta) const;

 private:
  std::vector<double> h_;
};

/// w_theta(t) = -d/dtheta P(X_{p(theta)} <= t), from the closed form
/// -G_theta(t) t sum_i h_i phi(q_i t). Never finite-differenced.
double radial_derivative_w(const RadialDirection& h, Shape m, double theta, double t);

/// w_theta(t) / (t g_theta(t)) = (1/theta) (1/(N M(t)) - 1).
double size_bias_ratio(const RadialDirection& h, Shape m, double theta, double t);

/// M(t) = sum_i q_i phi(q_i t) / sum_i phi(q_i t).
double weighted_mean_m(const ProbabilityVector& q, Shape m, double t);

}  // namespace dixie
