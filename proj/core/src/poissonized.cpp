#include "dixie/poissonized.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dixie/errors.hpp"
#include "dixie/gamma_kernel.hpp"
#include "dixie/probability.hpp"

namespace dixie {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Normalized reverse-hazard weights phi(q_i t) / max_j phi(q_j t) and the
// log of the maximum. Works where phi itself underflows.
struct HazardWeights {
  std::vector<double> weight;
  double log_scale;
};

HazardWeights hazard_weights(std::span<const double> q, Shape m, double t) {
  HazardWeights out{std::vector<double>(q.size()), kNegInf};
  for (std::size_t i = 0; i < q.size(); ++i) {
    out.weight[i] = log_reverse_hazard(m, q[i] * t);
    out.log_scale = std::max(out.log_scale, out.weight[i]);
  }
  for (double& w : out.weight) w = std::exp(w - out.log_scale);
  return out;
}

double log_product_cdf(std::span<const double> q, Shape m, double t) {
  double s = 0.0;
  for (double qi : q) s += erlang_cdf(m, qi * t).log_value;
  return s;
}

}  // namespace

PoissonizedLaw::PoissonizedLaw(const CollectorModel& model)
    : m_(model.m), groups_(RateGroups::from(model.p)) {}

double PoissonizedLaw::log_cdf(double t) const {
  if (t <= 0.0) return kNegInf;
  double s = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    s += groups_.count[g] * erlang_cdf(m_, groups_.rate[g] * t).log_value;
  }
  return s;
}

double PoissonizedLaw::cdf(double t) const { return std::exp(log_cdf(t)); }

double PoissonizedLaw::survival(double t) const {
  if (t <= 0.0) return 1.0;
  return -std::expm1(log_cdf(t));
}

double PoissonizedLaw::density(double t) const {
  if (t <= 0.0) return 0.0;
  // g = G sum_j p_j phi(p_j t), assembled in log scale.
  double log_max = kNegInf;
  std::vector<double> logs(groups_.size());
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    logs[g] = std::log(groups_.count[g] * groups_.rate[g]) +
              log_reverse_hazard(m_, groups_.rate[g] * t);
    log_max = std::max(log_max, logs[g]);
  }
  double s = 0.0;
  for (double l : logs) s += std::exp(l - log_max);
  return std::exp(log_cdf(t) + log_max + std::log(s));
}

double PoissonizedLaw::defect_mass(double t) const {
  double s = 0.0;
  for (std::size_t g = 0; g < groups_.size(); ++g) {
    s += groups_.count[g] * erlang_survival(m_, std::max(0.0, groups_.rate[g] * t)).value;
  }
  return s;
}

double PoissonizedLaw::unit_defect_time() const {
  // defect_mass decreases from N (>= 1) to 0; bisect in log t.
  double total = 0.0;
  for (double c : groups_.count) total += c;
  if (total <= 1.0) {
    // A single coupon: use the median-ish scale m / p.
    return m_.value() / groups_.rate.front();
  }
  double hi = m_.value() / groups_.rate.front();
  while (defect_mass(hi) > 1.0) hi *= 2.0;
  double lo = hi;
  while (defect_mass(lo) < 1.0) lo *= 0.5;
  for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
    const double mid = std::sqrt(lo * hi);
    (defect_mass(mid) > 1.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double PoissonizedLaw::horizon(double level) const {
  double t = unit_defect_time();
  while (defect_mass(t) >= level) t *= 1.25;
  return t;
}

double completion_cdf(const CollectorModel& model, double t) {
  if (t < 0.0) throw InvalidArgument("completion_cdf needs t >= 0");
  return PoissonizedLaw(model).cdf(t);
}

double completion_density(const CollectorModel& model, double t) {
  if (!(t > 0.0)) throw InvalidArgument("completion_density needs t > 0");
  return PoissonizedLaw(model).density(t);
}

RadialDirection::RadialDirection(std::vector<double> h) : h_(std::move(h)) {
  if (h_.size() < 2) throw InvalidArgument("a radial direction needs N >= 2");
  double abs_sum = 0.0;
  for (double v : h_) {
    if (!std::isfinite(v)) throw InvalidArgument("direction entries must be finite");
    abs_sum += std::abs(v);
  }
  if (abs_sum == 0.0) throw InvalidArgument("direction must be nonzero");
  if (std::abs(compensated_sum(h_)) > 1e-14 * std::max(1.0, abs_sum)) {
    throw InvalidArgument("direction entries must sum to zero");
  }
}

double RadialDirection::exit_theta() const {
  const double u = 1.0 / static_cast<double>(h_.size());
  double theta = std::numeric_limits<double>::infinity();
  for (double v : h_) {
    if (v < 0.0) theta = std::min(theta, u / -v);
  }
  return theta;
}

ProbabilityVector RadialDirection::at(double theta) const {
  const double u = 1.0 / static_cast<double>(h_.size());
  std::vector<double> q(h_.size());
  for (std::size_t i = 0; i < h_.size(); ++i) {
    q[i] = u + theta * h_[i];
    if (!(q[i] > 0.0)) throw DomainExit("theta leaves the probability simplex");
  }
  // Sums to one up to rounding; absorb it without reordering entries.
  const double total = compensated_sum(q);
  for (double& v : q) v /= total;
  return ProbabilityVector(std::move(q));
}

double radial_derivative_w(const RadialDirection& h, Shape m, double theta, double t) {
  if (!(t > 0.0)) throw InvalidArgument("radial_derivative_w needs t > 0");
  if (theta < 0.0) throw InvalidArgument("radial_derivative_w needs theta >= 0");
  const auto q = h.at(theta);
  const auto weights = hazard_weights(q.values(), m, t);
  double bracket = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) bracket -= h.components()[i] * weights.weight[i];
  if (bracket == 0.0) return 0.0;
  const double magnitude = std::exp(log_product_cdf(q.values(), m, t) + std::log(t) +
                                    weights.log_scale + std::log(std::abs(bracket)));
  return bracket > 0.0 ? magnitude : -magnitude;
}

double size_bias_ratio(const RadialDirection& h, Shape m, double theta, double t) {
  if (!(t > 0.0)) throw InvalidArgument("size_bias_ratio needs t > 0");
  const auto q = h.at(theta);
  const auto weights = hazard_weights(q.values(), m, t);
  // (1/theta)(C/(N B) - 1) with C - N B = -N theta sum h_i phi_i.
  double hs = 0.0, b = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    hs += h.components()[i] * weights.weight[i];
    b += q[i] * weights.weight[i];
  }
  return -hs / b;
}

double weighted_mean_m(const ProbabilityVector& q, Shape m, double t) {
  if (!(t > 0.0)) throw InvalidArgument("weighted_mean_m needs t > 0");
  if (q.is_uniform()) return 1.0 / static_cast<double>(q.size());
  const auto weights = hazard_weights(q.values(), m, t);
  double b = 0.0, c = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    b += q[i] * weights.weight[i];
    c += weights.weight[i];
  }
  return b / c;
}

}  // namespace dixie
