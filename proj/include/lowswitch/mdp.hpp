#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "lowswitch/tuple_set.hpp"

namespace lowswitch {

/// Row-sum tolerance: rows off by more than this are rejected, smaller
/// deviations are renormalized.
inline constexpr double kRowSumTolerance = 1e-9;

/// Rows within this distance of 1 are stored as given, so that writing an MDP
/// out and reading it back reproduces it bit for bit.
inline constexpr double kRowSumSlack = 1e-12;

/// Reward tensor r_h(s, a) in [0, 1], stored h-major.
class RewardFunction {
 public:
  RewardFunction() = default;
  /// All-zero reward.
  RewardFunction(std::size_t horizon, std::size_t states, std::size_t actions);
  /// values laid out ((h * states) + s) * actions + a.
  RewardFunction(std::size_t horizon, std::size_t states, std::size_t actions,
                 std::vector<double> values);

  /// 1_{h,s,a}: one at the target, zero elsewhere.
  static RewardFunction indicator(std::size_t horizon, std::size_t states, std::size_t actions,
                                  std::size_t h, std::size_t s, std::size_t a);
  /// 1_{h,s}: one for every action at (h, s).
  static RewardFunction state_indicator(std::size_t horizon, std::size_t states,
                                        std::size_t actions, std::size_t h, std::size_t s);

  [[nodiscard]] double operator()(std::size_t h, std::size_t s, std::size_t a) const {
    return values_[(h * states_ + s) * actions_ + a];
  }
  void set(std::size_t h, std::size_t s, std::size_t a, double value);

  [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t states() const noexcept { return states_; }
  [[nodiscard]] std::size_t actions() const noexcept { return actions_; }
  [[nodiscard]] std::span<const double> values() const noexcept { return values_; }

  bool operator==(const RewardFunction&) const = default;

 private:
  std::size_t horizon_ = 0;
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<double> values_;
};

/// Finite-horizon tabular MDP with a non-stationary kernel P_h(s'|s,a), a
/// known reward, and a fixed initial state. When `absorbing` is set the MDP is
/// an absorbing extension: the absorbing state is the last index, it loops to
/// itself under every action and pays nothing.
///
/// Instances are immutable and validated on construction.
class TabularMDP {
 public:
  TabularMDP() = default;
  /// transition laid out (((h * S + s) * A + a) * S + s'). Throws
  /// std::invalid_argument on shape errors and InvariantViolation when a
  /// probability or reward invariant fails.
  TabularMDP(std::size_t states, std::size_t actions, std::size_t horizon,
             std::vector<double> transition, RewardFunction reward, std::size_t initial_state,
             std::optional<std::size_t> absorbing = std::nullopt);

  [[nodiscard]] std::size_t num_states() const noexcept { return states_; }
  /// States other than the absorbing one.
  [[nodiscard]] std::size_t num_original_states() const noexcept {
    return absorbing_ ? states_ - 1 : states_;
  }
  [[nodiscard]] std::size_t num_actions() const noexcept { return actions_; }
  [[nodiscard]] std::size_t horizon() const noexcept { return horizon_; }
  [[nodiscard]] std::size_t initial_state() const noexcept { return initial_state_; }
  [[nodiscard]] std::optional<std::size_t> absorbing() const noexcept { return absorbing_; }

  [[nodiscard]] double transition(std::size_t h, std::size_t s, std::size_t a,
                                  std::size_t next) const {
    return transition_[row_offset(h, s, a) + next];
  }
  [[nodiscard]] std::span<const double> row(std::size_t h, std::size_t s, std::size_t a) const {
    return std::span<const double>(transition_).subspan(row_offset(h, s, a), states_);
  }
  [[nodiscard]] double reward(std::size_t h, std::size_t s, std::size_t a) const {
    return reward_(h, s, a);
  }
  [[nodiscard]] const RewardFunction& reward_function() const noexcept { return reward_; }
  [[nodiscard]] std::span<const double> transition_tensor() const noexcept { return transition_; }

  bool operator==(const TabularMDP&) const = default;

 private:
  [[nodiscard]] std::size_t row_offset(std::size_t h, std::size_t s, std::size_t a) const noexcept {
    return ((h * states_ + s) * actions_ + a) * states_;
  }

  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::size_t horizon_ = 0;
  std::vector<double> transition_;
  RewardFunction reward_;
  std::size_t initial_state_ = 0;
  std::optional<std::size_t> absorbing_;
};

/// Absorbing MDP for an infrequent set F: entries in F are zeroed and their
/// mass moved to a new absorbing state appended at index S. Rewards at the
/// absorbing state are 0.
TabularMDP build_absorbing(const TabularMDP& mdp, const TupleSet& infrequent);

/// Reward over the original states of `mdp`, padded with zeros when `mdp` has
/// an absorbing state. Throws std::invalid_argument on shape mismatch.
RewardFunction extend_reward(const RewardFunction& reward, const TabularMDP& mdp);

}  // namespace lowswitch
