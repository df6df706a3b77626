#pragma once

// Independent reference computations used only by the tests. Nothing here
// calls into the library's numerical paths.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

namespace oracle {

/// Q_m(x) by the plain finite sum in long double.
inline long double erlang_survival(int m, long double x) {
  long double term = 1.0L, sum = 1.0L;
  for (int j = 1; j < m; ++j) {
    term *= x / j;
    sum += term;
  }
  return std::exp(-x) * sum;
}

inline long double erlang_density(int m, long double x) {
  long double f = std::exp(-x);
  for (int j = 1; j < m; ++j) f *= x / j;
  return f;
}

/// Plain bisection for Q_m(b) = 1 / n.
inline double centering_b(double n, int m) {
  long double lo = 0.0L, hi = 1.0L;
  while (erlang_survival(m, hi) > 1.0L / n) hi *= 2.0L;
  for (int i = 0; i < 200; ++i) {
    const long double mid = 0.5L * (lo + hi);
    (erlang_survival(m, mid) > 1.0L / n ? lo : hi) = mid;
  }
  return static_cast<double>(0.5L * (lo + hi));
}

/// Two coupons, m = 1: T = 1 + Geometric, via E X = sum 1/p - 1/(p1+p2),
/// E X^2 = 2 sum 1/p^2 - 2/(p1+p2)^2.
struct TwoCoupon {
  double mean, rising2, var_T;
};
inline TwoCoupon two_coupon_m1(double p1, double p2) {
  const double ex = 1 / p1 + 1 / p2 - 1 / (p1 + p2);
  const double ex2 = 2 / (p1 * p1) + 2 / (p2 * p2) - 2 / ((p1 + p2) * (p1 + p2));
  return {ex, ex2, ex2 - ex * ex - ex};
}

inline double harmonic(int n, int power) {
  double s = 0.0;
  for (int k = n; k >= 1; --k) s += std::pow(k, -power);
  return s;
}

/// Exact law of the discrete completion time by forward propagation of the
/// count-vector Markov chain (counts capped at m). Returns the rising
/// moments E T^{(r)} for r = 1..max_r. Feasible for (m+1)^N up to ~10^4.
inline std::vector<long double> rising_moments_by_chain(const std::vector<double>& p, int m,
                                                        int max_r) {
  const int n = static_cast<int>(p.size());
  std::vector<int> radix(n, 1);
  int states = 1;
  for (int i = 0; i < n; ++i) {
    radix[i] = states;
    states *= (m + 1);
  }
  const int done = states - 1;  // all counts == m
  std::vector<long double> prob(states, 0.0L), next(states);
  prob[0] = 1.0L;
  std::vector<long double> moments(max_r + 1, 0.0L);
  long double alive = 1.0L;
  for (long k = 1; alive * std::pow(static_cast<long double>(k + max_r), max_r) > 1e-24L; ++k) {
    std::fill(next.begin(), next.end(), 0.0L);
    for (int s = 0; s < states; ++s) {
      if (prob[s] == 0.0L || s == done) continue;
      for (int i = 0; i < n; ++i) {
        const int c = (s / radix[i]) % (m + 1);
        const int t = c < m ? s + radix[i] : s;
        next[t] += prob[s] * p[i];
      }
    }
    const long double finished = next[done];
    next[done] = 0.0L;
    prob.swap(next);
    alive = 0.0L;
    for (long double v : prob) alive += v;
    long double rising = 1.0L;
    for (int r = 1; r <= max_r; ++r) {
      rising *= static_cast<long double>(k + r - 1);
      moments[r] += finished * rising;
    }
  }
  return moments;
}

/// Composite Simpson on [a, b] with n (even) panels.
inline double simpson(const std::function<double(double)>& f, double a, double b, int n) {
  if (n % 2) ++n;
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline double central_difference(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Coefficients of prod_{j=1}^{J} (1 - x^{a_j}) for integer rates a_j,
/// exact in 64-bit integers.
inline std::map<long, long long> signed_subset_sums(const std::vector<long>& rates) {
  std::map<long, long long> poly{{0, 1}};
  for (long a : rates) {
    std::map<long, long long> next = poly;
    for (const auto& [deg, c] : poly) next[deg + a] -= c;
    poly.swap(next);
  }
  return poly;
}

/// E Y^r for Y = max of independent Exp(a_j), by inclusion-exclusion over
/// the exact subset-sum coefficients: E Y^r = -r! sum_s c_s / s^r.
inline long double max_exponential_moment(const std::vector<long>& rates, int r) {
  long double fact = 1.0L;
  for (int i = 2; i <= r; ++i) fact *= i;
  long double s = 0.0L;
  for (const auto& [deg, c] : signed_subset_sums(rates)) {
    if (deg == 0) continue;
    s -= static_cast<long double>(c) / std::pow(static_cast<long double>(deg), r);
  }
  return fact * s;
}

/// E Y for Y = sup_{j>=1} Exp(rate j), by Euler's pentagonal theorem.
inline long double pentagonal_max_mean() {
  long double s = 0.0L;
  for (long k = 1; k < 2000000; ++k) {
    const long double kk = k;
    const long double term = 2.0L / (kk * (3 * kk - 1)) + 2.0L / (kk * (3 * kk + 1));
    s += (k % 2 ? 1.0L : -1.0L) * term;
  }
  return s;
}

}  // namespace oracle
