#include "lowswitch/mdp.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "lowswitch/errors.hpp"

namespace lowswitch {

namespace {

std::string where(std::size_t h, std::size_t s, std::size_t a) {
  return "(h=" + std::to_string(h) + ", s=" + std::to_string(s) + ", a=" + std::to_string(a) + ")";
}

}  // namespace

RewardFunction::RewardFunction(std::size_t horizon, std::size_t states, std::size_t actions)
    : horizon_(horizon), states_(states), actions_(actions),
      values_(horizon * states * actions, 0.0) {}

RewardFunction::RewardFunction(std::size_t horizon, std::size_t states, std::size_t actions,
                               std::vector<double> values)
    : horizon_(horizon), states_(states), actions_(actions), values_(std::move(values)) {
  if (values_.size() != horizon * states * actions) {
    throw std::invalid_argument("reward tensor has " + std::to_string(values_.size()) +
                                " entries, expected H*S*A = " +
                                std::to_string(horizon * states * actions));
  }
  for (double v : values_) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw InvariantViolation("reward entries must lie in [0,1], got " + std::to_string(v));
    }
  }
}

RewardFunction RewardFunction::indicator(std::size_t horizon, std::size_t states,
                                         std::size_t actions, std::size_t h, std::size_t s,
                                         std::size_t a) {
  if (h >= horizon || s >= states || a >= actions) {
    throw std::invalid_argument("indicator target " + where(h, s, a) + " out of range");
  }
  RewardFunction r(horizon, states, actions);
  r.values_[(h * states + s) * actions + a] = 1.0;
  return r;
}

RewardFunction RewardFunction::state_indicator(std::size_t horizon, std::size_t states,
                                               std::size_t actions, std::size_t h,
                                               std::size_t s) {
  if (h >= horizon || s >= states) {
    throw std::invalid_argument("indicator target out of range");
  }
  RewardFunction r(horizon, states, actions);
  for (std::size_t a = 0; a < actions; ++a) r.values_[(h * states + s) * actions + a] = 1.0;
  return r;
}

void RewardFunction::set(std::size_t h, std::size_t s, std::size_t a, double value) {
  if (h >= horizon_ || s >= states_ || a >= actions_) {
    throw std::invalid_argument("reward entry " + where(h, s, a) + " out of range");
  }
  if (!(value >= 0.0 && value <= 1.0)) {
    throw InvariantViolation("reward entries must lie in [0,1]");
  }
  values_[(h * states_ + s) * actions_ + a] = value;
}

TabularMDP::TabularMDP(std::size_t states, std::size_t actions, std::size_t horizon,
                       std::vector<double> transition, RewardFunction reward,
                       std::size_t initial_state, std::optional<std::size_t> absorbing)
    : states_(states),
      actions_(actions),
      horizon_(horizon),
      transition_(std::move(transition)),
      reward_(std::move(reward)),
      initial_state_(initial_state),
      absorbing_(absorbing) {
  if (states_ == 0 || actions_ == 0 || horizon_ == 0) {
    throw std::invalid_argument("MDP needs S, A, H >= 1");
  }
  if (transition_.size() != horizon_ * states_ * actions_ * states_) {
    throw std::invalid_argument("transition tensor has " + std::to_string(transition_.size()) +
                                " entries, expected H*S*A*S = " +
                                std::to_string(horizon_ * states_ * actions_ * states_));
  }
  if (reward_.horizon() != horizon_ || reward_.states() != states_ ||
      reward_.actions() != actions_) {
    throw std::invalid_argument("reward shape does not match the MDP");
  }
  if (initial_state_ >= states_) throw std::invalid_argument("initial state out of range");
  if (absorbing_) {
    if (*absorbing_ != states_ - 1) {
      throw std::invalid_argument("absorbing state must be the last state index");
    }
    if (states_ < 2) throw std::invalid_argument("absorbing MDP needs an original state");
    if (initial_state_ == *absorbing_) {
      throw std::invalid_argument("initial state cannot be the absorbing state");
    }
  }

  for (std::size_t h = 0; h < horizon_; ++h) {
    for (std::size_t s = 0; s < states_; ++s) {
      for (std::size_t a = 0; a < actions_; ++a) {
        const std::size_t off = row_offset(h, s, a);
        double sum = 0.0;
        for (std::size_t n = 0; n < states_; ++n) {
          const double p = transition_[off + n];
          if (!(p >= 0.0)) {
            throw InvariantViolation("transition row " + where(h, s, a) +
                                     " has a negative or NaN entry");
          }
          sum += p;
        }
        if (std::abs(sum - 1.0) > kRowSumTolerance) {
          throw InvariantViolation("transition row " + where(h, s, a) + " sums to " +
                                   std::to_string(sum) + ", not 1");
        }
        if (std::abs(sum - 1.0) > kRowSumSlack) {
          for (std::size_t n = 0; n < states_; ++n) transition_[off + n] /= sum;
        }
      }
    }
  }

  if (absorbing_) {
    const std::size_t dag = *absorbing_;
    for (std::size_t h = 0; h < horizon_; ++h) {
      for (std::size_t a = 0; a < actions_; ++a) {
        if (transition_[row_offset(h, dag, a) + dag] != 1.0) {
          throw InvariantViolation("absorbing state must self-loop with probability 1 at " +
                                   where(h, dag, a));
        }
        if (reward_(h, dag, a) != 0.0) {
          throw InvariantViolation("absorbing state must have zero reward at " +
                                   where(h, dag, a));
        }
      }
    }
  }
}

TabularMDP build_absorbing(const TabularMDP& mdp, const TupleSet& infrequent) {
  if (mdp.absorbing()) {
    throw std::invalid_argument("build_absorbing expects an MDP without an absorbing state");
  }
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  if (infrequent.horizon() != H || infrequent.states() != S || infrequent.actions() != A) {
    throw std::invalid_argument("infrequent tuple set shape does not match the MDP");
  }
  const std::size_t S1 = S + 1;
  const std::size_t dag = S;

  std::vector<double> kernel(H * S1 * A * S1, 0.0);
  std::vector<double> reward(H * S1 * A, 0.0);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        const std::size_t off = ((h * S1 + s) * A + a) * S1;
        double kept = 0.0;
        bool rerouted = false;
        for (std::size_t n = 0; n < S; ++n) {
          if (infrequent.contains(h, s, a, n)) {
            rerouted = true;
          } else {
            kernel[off + n] = mdp.transition(h, s, a, n);
            kept += kernel[off + n];
          }
        }
        // A row without infrequent tuples stays exactly as it was.
        kernel[off + dag] = rerouted ? std::max(0.0, 1.0 - kept) : 0.0;
        reward[(h * S1 + s) * A + a] = mdp.reward(h, s, a);
      }
    }
    for (std::size_t a = 0; a < A; ++a) kernel[((h * S1 + dag) * A + a) * S1 + dag] = 1.0;
  }
  return TabularMDP(S1, A, H, std::move(kernel), RewardFunction(H, S1, A, std::move(reward)),
                    mdp.initial_state(), dag);
}

RewardFunction extend_reward(const RewardFunction& reward, const TabularMDP& mdp) {
  if (reward.horizon() != mdp.horizon() || reward.actions() != mdp.num_actions()) {
    throw std::invalid_argument("reward shape does not match the MDP");
  }
  if (reward.states() == mdp.num_states()) return reward;
  if (reward.states() != mdp.num_original_states()) {
    throw std::invalid_argument("reward has " + std::to_string(reward.states()) +
                                " states, MDP has " + std::to_string(mdp.num_states()));
  }
  const std::size_t S1 = mdp.num_states();
  std::vector<double> values(reward.horizon() * S1 * reward.actions(), 0.0);
  for (std::size_t h = 0; h < reward.horizon(); ++h)
    for (std::size_t s = 0; s < reward.states(); ++s)
      for (std::size_t a = 0; a < reward.actions(); ++a)
        values[(h * S1 + s) * reward.actions() + a] = reward(h, s, a);
  return RewardFunction(reward.horizon(), S1, reward.actions(), std::move(values));
}

}  // namespace lowswitch
