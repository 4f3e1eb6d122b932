#include "lowswitch/dynamic_programming.hpp"

#include <stdexcept>
#include <string>

namespace lowswitch {

namespace {

void check_reward_shape(const RewardFunction& reward, const TabularMDP& mdp) {
  if (reward.horizon() != mdp.horizon() || reward.actions() != mdp.num_actions() ||
      (reward.states() != mdp.num_states() && reward.states() != mdp.num_original_states())) {
    throw std::invalid_argument("reward shape (" + std::to_string(reward.horizon()) + "," +
                                std::to_string(reward.states()) + "," +
                                std::to_string(reward.actions()) +
                                ") does not match the MDP");
  }
}

// Reward lookup that treats states past the reward's range (the absorbing
// state) as paying zero.
double reward_at(const RewardFunction& r, std::size_t h, std::size_t s, std::size_t a) {
  return s < r.states() ? r(h, s, a) : 0.0;
}

std::size_t action_at(const DeterministicPolicy& pi, std::size_t h, std::size_t s) {
  return s < pi.shape().states ? pi.action(h, s) : 0;
}

}  // namespace

void check_policy_shape(const DeterministicPolicy& policy, const TabularMDP& mdp) {
  const auto& shape = policy.shape();
  if (shape.horizon != mdp.horizon() || shape.actions != mdp.num_actions() ||
      (shape.states != mdp.num_original_states() && shape.states != mdp.num_states())) {
    throw std::invalid_argument("policy shape (" + std::to_string(shape.horizon) + "," +
                                std::to_string(shape.states) + "," +
                                std::to_string(shape.actions) + ") does not match the MDP");
  }
}

double value_of_policy(const DeterministicPolicy& policy, const RewardFunction& reward,
                       const TabularMDP& mdp) {
  check_policy_shape(policy, mdp);
  check_reward_shape(reward, mdp);
  const std::size_t S = mdp.num_states();
  std::vector<double> next(S, 0.0);
  std::vector<double> cur(S, 0.0);
  for (std::size_t h = mdp.horizon(); h-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t a = action_at(policy, h, s);
      const auto row = mdp.row(h, s, a);
      double v = reward_at(reward, h, s, a);
      for (std::size_t n = 0; n < S; ++n) v += row[n] * next[n];
      cur[s] = v;
    }
    std::swap(cur, next);
  }
  return next[mdp.initial_state()];
}

double value_of_policy(const StochasticPolicy& policy, const RewardFunction& reward,
                       const TabularMDP& mdp) {
  double v = 0.0;
  for (const auto& [w, pi] : policy.members()) v += w * value_of_policy(pi, reward, mdp);
  return v;
}

std::vector<std::vector<double>> state_distributions(const DeterministicPolicy& policy,
                                                     const TabularMDP& mdp) {
  check_policy_shape(policy, mdp);
  const std::size_t S = mdp.num_states();
  std::vector<std::vector<double>> dist(mdp.horizon() + 1, std::vector<double>(S, 0.0));
  dist[0][mdp.initial_state()] = 1.0;
  for (std::size_t h = 0; h < mdp.horizon(); ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      const double mass = dist[h][s];
      if (mass == 0.0) continue;
      const auto row = mdp.row(h, s, action_at(policy, h, s));
      for (std::size_t n = 0; n < S; ++n) dist[h + 1][n] += mass * row[n];
    }
  }
  return dist;
}

double visitation_prob(const DeterministicPolicy& policy, std::size_t h, std::size_t s,
                       const TabularMDP& mdp) {
  if (h >= mdp.horizon() || s >= mdp.num_states()) {
    throw std::invalid_argument("visitation target (h=" + std::to_string(h) +
                                ", s=" + std::to_string(s) + ") out of range");
  }
  return state_distributions(policy, mdp)[h][s];
}

double visitation_prob(const DeterministicPolicy& policy, std::size_t h, std::size_t s,
                       std::size_t a, const TabularMDP& mdp) {
  if (a >= mdp.num_actions()) {
    throw std::invalid_argument("visitation target action out of range");
  }
  const double p = visitation_prob(policy, h, s, mdp);
  return action_at(policy, h, s) == a ? p : 0.0;
}

OptimalSolution optimal_value_and_policy(const RewardFunction& reward, const TabularMDP& mdp) {
  check_reward_shape(reward, mdp);
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t S0 = mdp.num_original_states();
  DeterministicPolicy policy(PolicyShape{mdp.horizon(), S0, A});
  std::vector<double> next(S, 0.0);
  std::vector<double> cur(S, 0.0);
  for (std::size_t h = mdp.horizon(); h-- > 0;) {
    for (std::size_t s = 0; s < S; ++s) {
      double best = 0.0;
      std::size_t best_a = 0;
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = mdp.row(h, s, a);
        double q = reward_at(reward, h, s, a);
        for (std::size_t n = 0; n < S; ++n) q += row[n] * next[n];
        if (a == 0 || q > best) {
          best = q;
          best_a = a;
        }
      }
      // The absorbing state keeps action 0; it pays nothing and never leaves.
      if (s >= S0) {
        best_a = 0;
        best = next[s] + reward_at(reward, h, s, 0);
      } else {
        policy.set_action(h, s, best_a);
      }
      cur[s] = best;
    }
    std::swap(cur, next);
  }
  return {next[mdp.initial_state()], std::move(policy)};
}

}  // namespace lowswitch
