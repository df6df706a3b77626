#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace dixie {

/// Number of copies of each coupon that must be collected (Erlang shape).
class Shape {
 public:
  explicit Shape(int m);
  [[nodiscard]] int value() const noexcept { return m_; }
  friend bool operator==(Shape, Shape) = default;

 private:
  int m_;
};

/// Positive weights summing to one.
///
/// The stored order is the caller's order; numerical routines that need a
/// canonical order (to make results permutation invariant) sort internally.
class ProbabilityVector {
 public:
  /// Validates positivity and |sum - 1| <= 1e-12.
  explicit ProbabilityVector(std::vector<double> p);

  static ProbabilityVector uniform(std::size_t n);
  /// Normalizes arbitrary positive weights.
  static ProbabilityVector from_weights(std::span<const double> w);
  /// Normalizes if |sum - 1| <= tolerance, rejects otherwise.
  static ProbabilityVector normalized(std::span<const double> p, double tolerance);
  /// p_j proportional to j^{-alpha}, j = 1..n.
  static ProbabilityVector power_law(std::size_t n, double alpha);

  [[nodiscard]] std::size_t size() const noexcept { return p_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return p_[i]; }
  [[nodiscard]] std::span<const double> values() const noexcept { return p_; }
  [[nodiscard]] double min() const;
  [[nodiscard]] double max() const;
  [[nodiscard]] bool is_uniform() const;

 private:
  std::vector<double> p_;
};

/// Runs of equal probabilities in ascending order: `count[i]` coupons have
/// probability `rate[i]`.
struct RateGroups {
  std::vector<double> rate;
  std::vector<double> count;

  static RateGroups from(const ProbabilityVector& p);
  [[nodiscard]] std::size_t size() const noexcept { return rate.size(); }
};

/// One instance of the collector problem: collect `m` copies of each of
/// `p.size()` coupons drawn i.i.d. from `p`.
struct CollectorModel {
  Shape m;
  ProbabilityVector p;

  [[nodiscard]] std::size_t coupons() const noexcept { return p.size(); }
};

/// Neumaier-compensated sum.
double compensated_sum(std::span<const double> values);

}  // namespace dixie
