#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "lowswitch/mdp.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

/// A reward-bearing exit (h, s, a) of the lower-bound instance, 0-based.
struct ArmId {
  std::size_t h = 0;
  std::size_t s = 0;
  std::size_t a = 0;
  auto operator<=>(const ArmId&) const = default;
};

/// Tree-plus-arms instance. States 0..S-2 are ordinary, S-1 is the sink s†.
/// The initial state is 0.
struct HardInstanceSpec {
  std::size_t states = 0;   // S, including the sink
  std::size_t actions = 0;  // A
  std::size_t horizon = 0;  // H
  std::map<ArmId, double> arm_rewards;

  /// Throws std::invalid_argument unless A >= 2, S >= 2, S <= A^(H/2) and
  /// every reward sits on a valid arm with a value in [0,1].
  void validate() const;
};

/// Minimal positive H0 with S <= A^H0.
std::size_t minimal_tree_depth(std::size_t states, std::size_t actions);

/// Every reward-bearing arm in (h, s, a) order: layers H0..H-2 with a != 0,
/// then every action at the last layer.
std::vector<ArmId> all_arms(const HardInstanceSpec& spec);

/// Number of arms, (S-1)(A-1)(H-H0-1) + (S-1)A.
std::size_t arm_count(std::size_t states, std::size_t actions, std::size_t horizon);

/// Deterministic MDP: an A-ary tree over layers 0..H0-1 (state i, action j ->
/// A*i + j, overflowing to the sink), then action 0 stays put and any other
/// action exits to the sink collecting the arm reward; at the last layer
/// every action exits.
TabularMDP build_hard_mdp(const HardInstanceSpec& spec);

/// The arm at which the policy's unique trajectory leaves for the sink, or
/// nullopt when it falls into the sink inside the tree.
std::optional<ArmId> policy_to_arm(const DeterministicPolicy& policy,
                                   const HardInstanceSpec& spec);

/// Instance with arm k of all_arms set to 1 and every other arm at 0.
HardInstanceSpec problem_k(std::size_t states, std::size_t actions, std::size_t horizon,
                           std::size_t k);

}  // namespace lowswitch
