#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace lowswitch {

/// A transition (h, s, a, s') over original states; all indices 0-based.
struct TransitionTuple {
  std::size_t h = 0;
  std::size_t s = 0;
  std::size_t a = 0;
  std::size_t next = 0;
  auto operator<=>(const TransitionTuple&) const = default;
};

/// Set of transition tuples, stored as a dense membership map over the
/// (H, S, A, S) grid. Only insertion is exposed, so membership is monotone.
class TupleSet {
 public:
  TupleSet() = default;
  TupleSet(std::size_t horizon, std::size_t states, std::size_t actions);

  /// Every tuple of the grid.
  static TupleSet all(std::size_t horizon, std::size_t states, std::size_t actions);

  /// Returns true if the tuple was not already present. Out-of-range indices
  /// throw std::invalid_argument.
  bool insert(const TransitionTuple& t);
  [[nodiscard]] bool contains(const TransitionTuple& t) const;
  [[nodiscard]] bool contains(std::size_t h, std::size_t s, std::size_t a,
                              std::size_t next) const {
    return member_[offset(h, s, a, next)] != 0;
  }

  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t states() const noexcept { return states_; }
  [[nodiscard]] std::size_t actions() const noexcept { return actions_; }

  /// Members in lexicographic (h, s, a, s') order.
  [[nodiscard]] std::vector<TransitionTuple> tuples() const;

  bool operator==(const TupleSet&) const = default;

 private:
  [[nodiscard]] std::size_t offset(std::size_t h, std::size_t s, std::size_t a,
                                   std::size_t next) const noexcept {
    return ((h * states_ + s) * actions_ + a) * states_ + next;
  }
  void check(const TransitionTuple& t) const;

  std::size_t horizon_ = 0;
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<std::uint8_t> member_;
  std::size_t count_ = 0;
};

}  // namespace lowswitch
