#include "dixie/rng.hpp"

#include <numeric>

#include "dixie/errors.hpp"

namespace dixie {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  constexpr std::uint64_t kM0 = 0xD2511F53, kM1 = 0xCD9E8D57;
  constexpr std::uint32_t kW0 = 0x9E3779B9, kW1 = 0xBB67AE85;
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = kM0 * ctr[0];
    const std::uint64_t p1 = kM1 * ctr[2];
    ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
           static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    key[0] += kW0;
    key[1] += kW1;
  }
  return ctr;
}

PhiloxEngine::PhiloxEngine(std::uint64_t seed, std::uint64_t stream)
    : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
      stream_(stream) {}

PhiloxEngine::result_type PhiloxEngine::operator()() {
  if (used_ == 2) {
    buffer_ = philox4x32({static_cast<std::uint32_t>(block_), static_cast<std::uint32_t>(block_ >> 32),
                          static_cast<std::uint32_t>(stream_),
                          static_cast<std::uint32_t>(stream_ >> 32)},
                         key_);
    ++block_;
    used_ = 0;
  }
  const auto lo = buffer_[2 * used_], hi = buffer_[2 * used_ + 1];
  ++used_;
  return (static_cast<std::uint64_t>(hi) << 32) | lo;
}

Engine trial_engine(std::uint64_t seed, std::uint64_t trial) { return Engine(seed, trial); }

AliasTable::AliasTable(std::span<const double> weights)
    : prob_(weights.size()), alias_(weights.size()) {
  const std::size_t n = weights.size();
  if (n == 0) throw InvalidArgument("alias table needs at least one weight");
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<double> scaled(n);
  std::vector<std::uint32_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = weights[i] * static_cast<double>(n) / total;
    (scaled[i] < 1.0 ? small : large).push_back(static_cast<std::uint32_t>(i));
  }
  while (!small.empty() && !large.empty()) {
    const auto s = small.back();
    small.pop_back();
    const auto l = large.back();
    prob_[s] = scaled[s];
    alias_[s] = l;
    scaled[l] -= 1.0 - scaled[s];
    if (scaled[l] < 1.0) {
      large.pop_back();
      small.push_back(l);
    }
  }
  // Leftovers are 1 up to rounding.
  for (auto i : large) prob_[i] = 1.0, alias_[i] = i;
  for (auto i : small) prob_[i] = 1.0, alias_[i] = i;
}

std::size_t AliasTable::operator()(Engine& engine) const {
  std::uniform_int_distribution<std::size_t> column(0, prob_.size() - 1);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const std::size_t i = column(engine);
  return coin(engine) < prob_[i] ? i : alias_[i];
}

double erlang_draw(Engine& engine, int m) {
  std::exponential_distribution<double> exp1(1.0);
  double s = 0.0;
  for (int k = 0; k < m; ++k) s += exp1(engine);
  return s;
}

}  // namespace dixie
