#include "lowswitch/hard_instances.hpp"

#include <stdexcept>
#include <string>

namespace lowswitch {

namespace {

// base^exp, saturating at limit + 1.
std::size_t bounded_pow(std::size_t base, std::size_t exp, std::size_t limit) {
  std::size_t out = 1;
  for (std::size_t i = 0; i < exp && out <= limit; ++i) out *= base;
  return out;
}

bool is_arm(const HardInstanceSpec& spec, std::size_t h0, const ArmId& arm) {
  if (arm.s + 1 >= spec.states || arm.a >= spec.actions || arm.h >= spec.horizon) return false;
  if (arm.h + 1 == spec.horizon) return true;
  return arm.h >= h0 && arm.a != 0;
}

}  // namespace

std::size_t minimal_tree_depth(std::size_t states, std::size_t actions) {
  if (actions < 2) throw std::invalid_argument("the tree needs at least two actions");
  std::size_t depth = 1;
  std::size_t reach = actions;
  while (reach < states) {
    reach *= actions;
    ++depth;
  }
  return depth;
}

void HardInstanceSpec::validate() const {
  if (states < 2) throw std::invalid_argument("hard instance needs S >= 2");
  if (actions < 2) throw std::invalid_argument("hard instance needs A >= 2");
  if (horizon < 2) throw std::invalid_argument("hard instance needs H >= 2");
  // S <= A^(H/2)  <=>  S^2 <= A^H
  if (bounded_pow(actions, horizon, states * states) < states * states) {
    throw std::invalid_argument("hard instance needs S <= A^(H/2)");
  }
  const std::size_t h0 = minimal_tree_depth(states, actions);
  for (const auto& [arm, value] : arm_rewards) {
    if (!is_arm(*this, h0, arm)) {
      throw std::invalid_argument("reward at (" + std::to_string(arm.h) + "," +
                                  std::to_string(arm.s) + "," + std::to_string(arm.a) +
                                  ") is not on an arm");
    }
    if (!(value >= 0.0 && value <= 1.0)) {
      throw std::invalid_argument("arm rewards must lie in [0,1]");
    }
  }
}

std::vector<ArmId> all_arms(const HardInstanceSpec& spec) {
  const std::size_t h0 = minimal_tree_depth(spec.states, spec.actions);
  std::vector<ArmId> arms;
  for (std::size_t h = h0; h < spec.horizon; ++h) {
    for (std::size_t s = 0; s + 1 < spec.states; ++s) {
      for (std::size_t a = 0; a < spec.actions; ++a) {
        const ArmId arm{h, s, a};
        if (is_arm(spec, h0, arm)) arms.push_back(arm);
      }
    }
  }
  return arms;
}

std::size_t arm_count(std::size_t states, std::size_t actions, std::size_t horizon) {
  const std::size_t h0 = minimal_tree_depth(states, actions);
  return (states - 1) * (actions - 1) * (horizon - h0 - 1) + (states - 1) * actions;
}

TabularMDP build_hard_mdp(const HardInstanceSpec& spec) {
  spec.validate();
  const std::size_t S = spec.states;
  const std::size_t A = spec.actions;
  const std::size_t H = spec.horizon;
  const std::size_t sink = S - 1;
  const std::size_t h0 = minimal_tree_depth(S, A);

  std::vector<double> transition(H * S * A * S, 0.0);
  auto set = [&](std::size_t h, std::size_t s, std::size_t a, std::size_t next) {
    transition[((h * S + s) * A + a) * S + next] = 1.0;
  };
  RewardFunction reward(H, S, A);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        if (s == sink) {
          set(h, s, a, sink);
        } else if (h < h0) {
          const std::size_t child = A * s + a;
          set(h, s, a, child >= sink ? sink : child);
        } else if (h + 1 < H && a == 0) {
          set(h, s, a, s);
        } else {
          set(h, s, a, sink);
        }
      }
    }
  }
  for (const auto& [arm, value] : spec.arm_rewards) reward.set(arm.h, arm.s, arm.a, value);
  return TabularMDP(S, A, H, std::move(transition), std::move(reward), 0);
}

std::optional<ArmId> policy_to_arm(const DeterministicPolicy& policy,
                                   const HardInstanceSpec& spec) {
  const PolicyShape expected{spec.horizon, spec.states, spec.actions};
  if (!(policy.shape() == expected)) {
    throw std::invalid_argument("policy shape does not match the hard instance");
  }
  const std::size_t A = spec.actions;
  const std::size_t sink = spec.states - 1;
  const std::size_t h0 = minimal_tree_depth(spec.states, A);
  std::size_t s = 0;
  for (std::size_t h = 0; h < spec.horizon; ++h) {
    const std::size_t a = policy.action(h, s);
    if (h < h0) {
      const std::size_t child = A * s + a;
      if (child >= sink) return std::nullopt;
      s = child;
    } else if (h + 1 < spec.horizon && a == 0) {
      continue;
    } else {
      return ArmId{h, s, a};
    }
  }
  return std::nullopt;  // unreachable: the last layer always exits
}

HardInstanceSpec problem_k(std::size_t states, std::size_t actions, std::size_t horizon,
                           std::size_t k) {
  HardInstanceSpec spec{states, actions, horizon, {}};
  spec.validate();
  const auto arms = all_arms(spec);
  if (k >= arms.size()) {
    throw std::invalid_argument("problem index " + std::to_string(k) + " exceeds the " +
                                std::to_string(arms.size()) + " arms");
  }
  spec.arm_rewards[arms[k]] = 1.0;
  return spec;
}

}  // namespace lowswitch
