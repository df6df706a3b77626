#include "dixie/quadrature.hpp"

#include "dixie/errors.hpp"

namespace dixie {

std::vector<double> log_grid(double lo, double hi, int per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || per_decade < 1) {
    throw InvalidArgument("log_grid needs 0 < lo < hi and per_decade >= 1");
  }
  const double decades = std::log10(hi / lo);
  const int steps = std::max(1, static_cast<int>(std::ceil(decades * per_decade - 1e-9)));
  std::vector<double> grid(steps + 1);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i <= steps; ++i) {
    grid[i] = std::exp(llo + (lhi - llo) * i / steps);
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (points < 2 || !(hi > lo)) throw InvalidArgument("linear_grid needs points >= 2 and hi > lo");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) grid[i] = lo + (hi - lo) * i / (points - 1);
  grid.back() = hi;
  return grid;
}

namespace {

MonotoneCheck check_direction(std::span<const double> v, double rel_slack, double sign) {
  MonotoneCheck out;
  for (std::size_t i = 0; i + 1 < v.size(); ++i) {
    const double slack = rel_slack * (1.0 + std::max(std::abs(v[i]), std::abs(v[i + 1])));
    // sign = +1: require v[i+1] > v[i] - slack.
    const double wrong_way = sign * (v[i] - v[i + 1]);
    if (!(wrong_way < slack)) {
      if (out.holds) out.first_violation = i;
      out.holds = false;
      ++out.violations;
      out.worst_excess = std::max(out.worst_excess, wrong_way - slack);
    }
  }
  return out;
}

}  // namespace

MonotoneCheck check_increasing(std::span<const double> v, double rel_slack) {
  return check_direction(v, rel_slack, 1.0);
}

MonotoneCheck check_decreasing(std::span<const double> v, double rel_slack) {
  return check_direction(v, rel_slack, -1.0);
}

}  // namespace dixie
