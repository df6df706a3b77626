#pragma once

// Gumbel centering for the equal-probability collector:
//   n Q_m(b) = 1,   a = Q_m(b) / f_m(b) = 1 / h_m(b).

#include <optional>
#include <vector>

#include "dixie/probability.hpp"

namespace dixie {

struct CenteringPair {
  double n;
  Shape m;
  double b;  ///< location
  double a;  ///< scale
};

struct Bracket {
  double lo;
  double hi;
};

/// Requires n > 1 (throws NonBracketable otherwise). The optional bracket
/// replaces the default starting bracket; it is widened as needed.
CenteringPair solve_centering(double n, Shape m, std::optional<Bracket> start = std::nullopt);

struct QuantileRow {
  double x;
  double ratio;        ///< n Q_m(b + a x) / e^{-x}
  bool within_bound;   ///< ratio <= 1 + 1e-10 (only asserted for x >= 0)
};

struct QuantileReport {
  CenteringPair pair;
  std::vector<QuantileRow> rows;
  double clock_ratio;   ///< n a^2 / b
  bool right_tail_ok;   ///< every x >= 0 row within bound
};

QuantileReport quantile_inequality_report(double n, Shape m, const std::vector<double>& x_grid);

}  // namespace dixie
