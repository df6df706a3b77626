#include "dixie/probability.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dixie/errors.hpp"

namespace dixie {

Shape::Shape(int m) : m_(m) {
  if (m < 1) throw InvalidArgument("shape m must be >= 1, got " + std::to_string(m));
}

double compensated_sum(std::span<const double> values) {
  double sum = 0.0;
  double carry = 0.0;
  for (double v : values) {
    const double t = sum + v;
    if (std::abs(sum) >= std::abs(v)) {
      carry += (sum - t) + v;
    } else {
      carry += (v - t) + sum;
    }
    sum = t;
  }
  return sum + carry;
}

ProbabilityVector::ProbabilityVector(std::vector<double> p) : p_(std::move(p)) {
  if (p_.empty()) throw InvalidArgument("probability vector must be nonempty");
  for (double v : p_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("probabilities must be positive and finite");
    }
  }
  const double total = compensated_sum(p_);
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidArgument("probabilities must sum to 1 (|sum - 1| <= 1e-12)");
  }
}

ProbabilityVector ProbabilityVector::uniform(std::size_t n) {
  if (n == 0) throw InvalidArgument("uniform law needs n >= 1");
  return ProbabilityVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

ProbabilityVector ProbabilityVector::from_weights(std::span<const double> w) {
  if (w.empty()) throw InvalidArgument("weights must be nonempty");
  for (double v : w) {
    if (!(v > 0.0) || !std::isfinite(v)) throw InvalidArgument("weights must be positive");
  }
  const double total = compensated_sum(w);
  std::vector<double> p(w.begin(), w.end());
  for (double& v : p) v /= total;
  return ProbabilityVector(std::move(p));
}

ProbabilityVector ProbabilityVector::normalized(std::span<const double> p, double tolerance) {
  if (p.empty()) throw InvalidArgument("probability vector must be nonempty");
  const double total = compensated_sum(p);
  if (std::abs(total - 1.0) > tolerance) {
    throw InvalidArgument("probabilities sum to " + std::to_string(total) +
                          ", outside the normalization tolerance");
  }
  return from_weights(p);
}

ProbabilityVector ProbabilityVector::power_law(std::size_t n, double alpha) {
  if (n == 0) throw InvalidArgument("power law needs n >= 1");
  if (!(alpha > 0.0)) throw InvalidArgument("power-law exponent must be positive");
  std::vector<double> w(n);
  for (std::size_t j = 0; j < n; ++j) w[j] = std::pow(static_cast<double>(j + 1), -alpha);
  return from_weights(w);
}

double ProbabilityVector::min() const { return *std::min_element(p_.begin(), p_.end()); }
double ProbabilityVector::max() const { return *std::max_element(p_.begin(), p_.end()); }

bool ProbabilityVector::is_uniform() const {
  const double target = 1.0 / static_cast<double>(p_.size());
  return std::all_of(p_.begin(), p_.end(),
                     [&](double v) { return std::abs(v - target) <= 1e-15; });
}

RateGroups RateGroups::from(const ProbabilityVector& p) {
  std::vector<double> sorted(p.values().begin(), p.values().end());
  std::sort(sorted.begin(), sorted.end());
  RateGroups g;
  for (double v : sorted) {
    if (!g.rate.empty() && g.rate.back() == v) {
      g.count.back() += 1.0;
    } else {
      g.rate.push_back(v);
      g.count.push_back(1.0);
    }
  }
  return g;
}

}  // namespace dixie
