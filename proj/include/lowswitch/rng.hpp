#pragma once

#include <cstdint>
#include <initializer_list>
#include <limits>

namespace lowswitch {

/// Counter-based 64-bit generator.
///
/// A stream is identified by a 64-bit key; the n-th output is a pure function
/// of (key, n), namely the SplitMix64 finalizer applied to key + n * golden.
/// Child streams are derived by hashing the parent key with a child id, which
/// gives the documented hierarchy
///
///     run seed -> stage -> phase -> policy block -> episode
///
/// Because every episode draws from its own stream, the trajectories of a run
/// do not depend on the order (or the thread) in which blocks are sampled.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  explicit CounterRng(std::uint64_t key) noexcept : key_(key) {}

  /// Root stream for a run seed.
  static CounterRng from_seed(std::uint64_t seed) noexcept;

  /// Independent child stream; does not advance this stream.
  [[nodiscard]] CounterRng child(std::uint64_t id) const noexcept;
  [[nodiscard]] CounterRng child(std::initializer_list<std::uint64_t> path) const noexcept;

  std::uint64_t next_u64() noexcept;
  /// Uniform double on [0, 1) with 53 random bits.
  double uniform() noexcept;
  /// Uniform integer on [0, bound); bound must be > 0.
  std::uint64_t below(std::uint64_t bound) noexcept;

  std::uint64_t operator()() noexcept { return next_u64(); }
  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  [[nodiscard]] std::uint64_t key() const noexcept { return key_; }
  [[nodiscard]] std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace lowswitch
