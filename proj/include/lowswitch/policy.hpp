#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

namespace lowswitch {

/// Shape of a deterministic policy table: horizon x states x actions.
struct PolicyShape {
  std::size_t horizon = 0;
  std::size_t states = 0;
  std::size_t actions = 0;
  bool operator==(const PolicyShape&) const = default;
};

/// Deterministic non-stationary policy, a table (h, s) -> action over the
/// original states of an MDP. On an absorbing extension the policy plays
/// action 0 at the absorbing state.
class DeterministicPolicy {
 public:
  DeterministicPolicy() = default;
  /// All-zero policy.
  explicit DeterministicPolicy(PolicyShape shape);
  /// Table laid out h-major: table[h * states + s]. Throws
  /// std::invalid_argument on size mismatch or an out-of-range action.
  DeterministicPolicy(PolicyShape shape, std::vector<std::uint32_t> table);

  [[nodiscard]] std::size_t action(std::size_t h, std::size_t s) const {
    return table_[h * shape_.states + s];
  }
  void set_action(std::size_t h, std::size_t s, std::size_t a);

  [[nodiscard]] const PolicyShape& shape() const noexcept { return shape_; }
  [[nodiscard]] const std::vector<std::uint32_t>& table() const noexcept { return table_; }

  /// Number of (h, s) entries where the two policies disagree.
  [[nodiscard]] std::size_t differing_entries(const DeterministicPolicy& other) const;

  bool operator==(const DeterministicPolicy&) const = default;

 private:
  PolicyShape shape_{};
  std::vector<std::uint32_t> table_;
};

/// Finite mixture of deterministic policies. A fresh member is drawn at the
/// start of each episode, so its value is the weighted sum of member values.
class StochasticPolicy {
 public:
  using Member = std::pair<double, DeterministicPolicy>;

  StochasticPolicy() = default;
  /// Weights must be non-negative and sum to 1 within 1e-9; members must share
  /// a shape.
  explicit StochasticPolicy(std::vector<Member> members);
  /// Uniform mixture.
  static StochasticPolicy uniform(std::vector<DeterministicPolicy> members);

  [[nodiscard]] const std::vector<Member>& members() const noexcept { return members_; }
  [[nodiscard]] PolicyShape shape() const;

 private:
  std::vector<Member> members_;
};

}  // namespace lowswitch
