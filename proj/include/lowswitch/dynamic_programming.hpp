#pragma once

#include <cstddef>
#include <vector>

#include "lowswitch/mdp.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

/// V^pi_1(s_1) by exact backward induction. The reward may cover either all
/// states of `mdp` or only its original states (zero at the absorbing state).
/// The policy covers the original states; at the absorbing state it plays
/// action 0. Throws std::invalid_argument on any dimension mismatch.
double value_of_policy(const DeterministicPolicy& policy, const RewardFunction& reward,
                       const TabularMDP& mdp);
double value_of_policy(const StochasticPolicy& policy, const RewardFunction& reward,
                       const TabularMDP& mdp);

/// Probability that `policy` visits (h, s, a), computed by forward propagation
/// of the state distribution. Equal to V^pi(1_{h,s,a}, P).
double visitation_prob(const DeterministicPolicy& policy, std::size_t h, std::size_t s,
                       std::size_t a, const TabularMDP& mdp);
/// Probability that `policy` visits state s at step h.
double visitation_prob(const DeterministicPolicy& policy, std::size_t h, std::size_t s,
                       const TabularMDP& mdp);

/// Distribution of s_h for h = 0..H (H+1 rows of num_states entries).
std::vector<std::vector<double>> state_distributions(const DeterministicPolicy& policy,
                                                     const TabularMDP& mdp);

struct OptimalSolution {
  double value = 0.0;
  DeterministicPolicy policy;
};

/// V*_1(s_1) and a maximizing policy over the original states. Ties go to the
/// lowest action index.
OptimalSolution optimal_value_and_policy(const RewardFunction& reward, const TabularMDP& mdp);

/// Checks that `policy` fits `mdp`; throws std::invalid_argument otherwise.
void check_policy_shape(const DeterministicPolicy& policy, const TabularMDP& mdp);

}  // namespace lowswitch
