#pragma once

// Reproducible random streams. Philox4x32-10 is a counter-based generator:
// block k of trial i under seed s is a pure function of (s, i, k), so work can
// be split across threads in any way without changing a single draw, and
// opening a trial's stream costs nothing.

#include <array>
#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <vector>

namespace dixie {

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// UniformRandomBitGenerator over the Philox blocks of one (seed, trial).
class PhiloxEngine {
 public:
  using result_type = std::uint64_t;

  PhiloxEngine(std::uint64_t seed, std::uint64_t stream);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }
  result_type operator()();

 private:
  std::array<std::uint32_t, 2> key_;
  std::uint64_t stream_;
  std::uint64_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 2;  // 64-bit words consumed from buffer_
};

using Engine = PhiloxEngine;

Engine trial_engine(std::uint64_t seed, std::uint64_t trial);

/// Vose alias table: O(1) draws from a fixed categorical law.
class AliasTable {
 public:
  explicit AliasTable(std::span<const double> weights);

  [[nodiscard]] std::size_t size() const noexcept { return prob_.size(); }
  std::size_t operator()(Engine& engine) const;

 private:
  std::vector<double> prob_;
  std::vector<std::uint32_t> alias_;
};

/// Gamma(m, 1) as a sum of m unit exponentials.
double erlang_draw(Engine& engine, int m);

}  // namespace dixie
