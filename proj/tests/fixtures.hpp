#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "lowswitch/envs.hpp"
#include "lowswitch/mdp.hpp"
#include "lowswitch/rng.hpp"

namespace fixture {

using lowswitch::CounterRng;
using lowswitch::RewardFunction;
using lowswitch::TabularMDP;

/// Absorbing kernel over S+1 states whose original rows put at least
/// `sink_share` on the absorbing column. Rewards are zero.
inline TabularMDP random_absorbing(std::size_t states, std::size_t actions, std::size_t horizon,
                                   double sink_share, CounterRng& rng) {
  const std::size_t n = states + 1;
  std::vector<double> t(horizon * n * actions * n, 0.0);
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t a = 0; a < actions; ++a) {
        double* row = &t[((h * n + s) * actions + a) * n];
        if (s == states) {
          row[states] = 1.0;
          continue;
        }
        double total = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          row[k] = -std::log1p(-rng.uniform());
          total += row[k];
        }
        for (std::size_t k = 0; k < n; ++k) row[k] = (1.0 - sink_share) * row[k] / total;
        row[states] += sink_share;
      }
    }
  }
  return TabularMDP(n, actions, horizon, std::move(t), RewardFunction(horizon, n, actions), 0,
                    states);
}

/// Scales every original-destination entry of `base` by a factor drawn from
/// [1 - theta, 1 + theta] and sends the residual mass to the absorbing state.
/// Requires the absorbing column of `base` to hold enough mass.
inline TabularMDP perturb(const TabularMDP& base, double theta, CounterRng& rng) {
  const std::size_t n = base.num_states();
  const std::size_t sink = *base.absorbing();
  std::vector<double> t(base.transition_tensor().begin(), base.transition_tensor().end());
  for (std::size_t h = 0; h < base.horizon(); ++h) {
    for (std::size_t s = 0; s < sink; ++s) {
      for (std::size_t a = 0; a < base.num_actions(); ++a) {
        double* row = &t[((h * n + s) * base.num_actions() + a) * n];
        double kept = 0.0;
        for (std::size_t k = 0; k < sink; ++k) {
          row[k] *= 1.0 + theta * (2.0 * rng.uniform() - 1.0);
          kept += row[k];
        }
        row[sink] = 1.0 - kept;
      }
    }
  }
  return TabularMDP(n, base.num_actions(), base.horizon(), std::move(t), base.reward_function(),
                    base.initial_state(), sink);
}

/// Deterministic MDP where every (h, s, a) moves to next(h, s, a).
template <class Next, class Reward>
TabularMDP deterministic(std::size_t states, std::size_t actions, std::size_t horizon,
                         Next next, Reward reward) {
  std::vector<double> t(horizon * states * actions * states, 0.0);
  RewardFunction r(horizon, states, actions);
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t s = 0; s < states; ++s) {
      for (std::size_t a = 0; a < actions; ++a) {
        t[((h * states + s) * actions + a) * states + next(h, s, a)] = 1.0;
        r.set(h, s, a, reward(h, s, a));
      }
    }
  }
  return TabularMDP(states, actions, horizon, std::move(t), std::move(r), 0);
}

}  // namespace fixture
