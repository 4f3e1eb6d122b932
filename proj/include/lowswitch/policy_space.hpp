#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lowswitch/mdp.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

/// Largest explicit version space we are willing to materialize.
inline constexpr std::uint64_t kMaxPolicyCount = std::uint64_t{1} << 24;

/// A^(S*H); throws std::invalid_argument when it exceeds kMaxPolicyCount.
std::uint64_t policy_count(const PolicyShape& shape);

/// Mixed-radix index of a policy: digit j = h * S + s holds pi_h(s), digit 0
/// least significant.
std::uint64_t encode(const DeterministicPolicy& policy);
/// Inverse of encode. Throws std::invalid_argument when index >= A^(S*H).
DeterministicPolicy decode(std::uint64_t index, const PolicyShape& shape);

/// Explicit set of deterministic policies, kept as a membership bitset over
/// policy indices. A value type: operations return new spaces.
class VersionSpace {
 public:
  VersionSpace() = default;

  static VersionSpace full(const PolicyShape& shape);
  static VersionSpace empty(const PolicyShape& shape);
  static VersionSpace of(const PolicyShape& shape, const std::vector<std::uint64_t>& indices);

  [[nodiscard]] bool contains(std::uint64_t index) const;
  [[nodiscard]] std::uint64_t size() const noexcept { return count_; }
  [[nodiscard]] bool empty() const noexcept { return count_ == 0; }
  [[nodiscard]] bool is_full() const noexcept { return count_ == universe_; }
  [[nodiscard]] std::uint64_t universe() const noexcept { return universe_; }
  [[nodiscard]] const PolicyShape& shape() const noexcept { return shape_; }

  /// Member indices in increasing order.
  [[nodiscard]] std::vector<std::uint64_t> members() const;
  /// Calls fn(index) for each member in increasing index order.
  void for_each(const std::function<void(std::uint64_t)>& fn) const;

  [[nodiscard]] bool is_subset_of(const VersionSpace& other) const;

  bool operator==(const VersionSpace&) const = default;

 private:
  void set(std::uint64_t index);

  PolicyShape shape_{};
  std::uint64_t universe_ = 0;
  std::vector<std::uint64_t> words_;
  std::uint64_t count_ = 0;
};

struct BestPolicy {
  DeterministicPolicy policy;
  std::uint64_t index = 0;
  double value = 0.0;
};

/// argmax over the space of V^pi(reward, mdp). The full space is solved by
/// backward induction (lowest action wins ties); a proper subset is scanned
/// and ties go to the lowest policy index. Throws PreconditionError when the
/// space is empty.
BestPolicy best_in_set(const VersionSpace& space, const RewardFunction& reward,
                       const TabularMDP& mdp);

/// Exhaustive scan regardless of whether the space is full.
BestPolicy best_in_set_by_scan(const VersionSpace& space, const RewardFunction& reward,
                               const TabularMDP& mdp);

using PolicyPredicate = std::function<bool(std::uint64_t index, const DeterministicPolicy&)>;

/// Copy of `space` without the members for which `predicate` holds.
VersionSpace eliminate(const VersionSpace& space, const PolicyPredicate& predicate);

}  // namespace lowswitch
