#include "lowswitch/estimation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lowswitch {

LayerCounts::LayerCounts(std::size_t h, std::size_t states, std::size_t actions)
    : h_(h),
      states_(states),
      actions_(actions),
      next_counts_(states * actions * states, 0),
      pair_counts_(states * actions, 0) {}

void LayerCounts::add(std::size_t s, std::size_t a, std::size_t next, std::uint64_t n) {
  if (s >= states_ || a >= actions_ || next >= states_) {
    throw std::invalid_argument("count index out of range");
  }
  next_counts_[(s * actions_ + a) * states_ + next] += n;
  pair_counts_[s * actions_ + a] += n;
}

LayerCounts count_layer(const EpisodeDataset& dataset, std::size_t h, std::size_t states,
                        std::size_t actions) {
  LayerCounts counts(h, states, actions);
  for (const auto& traj : dataset) {
    if (traj.horizon() <= h) {
      throw std::invalid_argument("trajectory shorter than layer " + std::to_string(h));
    }
    counts.add(traj.states[h], traj.actions[h], traj.states[h + 1]);
  }
  return counts;
}

double confidence_log(std::size_t horizon, std::size_t actions, std::uint64_t episodes,
                      double delta) {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  return std::log(2.0 * static_cast<double>(horizon) * static_cast<double>(actions) *
                  static_cast<double>(episodes) / delta);
}

double infrequent_threshold(std::size_t horizon, double iota) {
  if (!(iota > 0.0)) throw std::invalid_argument("iota must be positive");
  const double H = static_cast<double>(horizon);
  return kInfrequentMultiplier * H * H * iota;
}

TupleSet update_infrequent(TupleSet infrequent, const LayerCounts& counts, std::size_t h,
                           double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("threshold must be positive");
  if (counts.states() != infrequent.states() || counts.actions() != infrequent.actions() ||
      h >= infrequent.horizon()) {
    throw std::invalid_argument("counts do not match the tuple set shape");
  }
  for (std::size_t s = 0; s < counts.states(); ++s)
    for (std::size_t a = 0; a < counts.actions(); ++a)
      for (std::size_t n = 0; n < counts.states(); ++n)
        if (static_cast<double>(counts.count(s, a, n)) <= threshold) {
          infrequent.insert({h, s, a, n});
        }
  return infrequent;
}

TabularMDP initial_estimate(std::size_t states, std::size_t actions, std::size_t horizon,
                            std::size_t initial_state) {
  const std::size_t S1 = states + 1;
  const std::size_t dag = states;
  std::vector<double> kernel(horizon * S1 * actions * S1, 0.0);
  const double uniform = 1.0 / static_cast<double>(states);
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t s = 0; s < S1; ++s) {
      for (std::size_t a = 0; a < actions; ++a) {
        const std::size_t off = ((h * S1 + s) * actions + a) * S1;
        if (s == dag) {
          kernel[off + dag] = 1.0;
        } else {
          for (std::size_t n = 0; n < states; ++n) kernel[off + n] = uniform;
        }
      }
    }
  }
  return TabularMDP(S1, actions, horizon, std::move(kernel), RewardFunction(horizon, S1, actions),
                    initial_state, dag);
}

TabularMDP estimate_transition(const LayerCounts& counts, const TupleSet& infrequent,
                               std::size_t h, const TabularMDP& base) {
  if (!base.absorbing()) {
    throw std::invalid_argument("estimate_transition needs an absorbing base kernel");
  }
  const std::size_t S0 = base.num_original_states();
  const std::size_t S1 = base.num_states();
  const std::size_t A = base.num_actions();
  const std::size_t dag = *base.absorbing();
  if (counts.states() != S0 || counts.actions() != A || h >= base.horizon() ||
      infrequent.states() != S0 || infrequent.actions() != A ||
      infrequent.horizon() != base.horizon()) {
    throw std::invalid_argument("estimate_transition inputs have mismatched shapes");
  }

  std::vector<double> kernel(base.transition_tensor().begin(), base.transition_tensor().end());
  for (std::size_t s = 0; s < S0; ++s) {
    for (std::size_t a = 0; a < A; ++a) {
      const std::size_t off = ((h * S1 + s) * A + a) * S1;
      const std::uint64_t total = counts.count(s, a);
      if (total == 0) {
        bool all_infrequent = true;
        for (std::size_t n = 0; n < S0; ++n) all_infrequent &= infrequent.contains(h, s, a, n);
        if (!all_infrequent) continue;  // keep the base row
      }
      double kept = 0.0;
      for (std::size_t n = 0; n < S0; ++n) {
        double p = 0.0;
        if (!infrequent.contains(h, s, a, n)) {
          p = static_cast<double>(counts.count(s, a, n)) / static_cast<double>(total);
        }
        kernel[off + n] = p;
        kept += p;
      }
      kernel[off + dag] = std::max(0.0, 1.0 - kept);
    }
  }
  for (std::size_t a = 0; a < A; ++a) {
    const std::size_t off = ((h * S1 + dag) * A + a) * S1;
    for (std::size_t n = 0; n < S1; ++n) kernel[off + n] = n == dag ? 1.0 : 0.0;
  }
  return TabularMDP(S1, A, base.horizon(), std::move(kernel), base.reward_function(),
                    base.initial_state(), dag);
}

bool check_multiplicative_accuracy(const TabularMDP& reference, const TabularMDP& candidate,
                                   double theta) {
  if (!reference.absorbing() || !candidate.absorbing()) {
    throw std::invalid_argument("multiplicative accuracy is defined for absorbing kernels");
  }
  if (reference.num_states() != candidate.num_states() ||
      reference.num_actions() != candidate.num_actions() ||
      reference.horizon() != candidate.horizon()) {
    throw std::invalid_argument("kernels have different shapes");
  }
  if (!(theta >= 0.0)) throw std::invalid_argument("theta must be non-negative");
  const std::size_t S0 = reference.num_original_states();
  for (std::size_t h = 0; h < reference.horizon(); ++h)
    for (std::size_t s = 0; s < S0; ++s)
      for (std::size_t a = 0; a < reference.num_actions(); ++a)
        for (std::size_t n = 0; n < S0; ++n) {
          const double p = reference.transition(h, s, a, n);
          const double q = candidate.transition(h, s, a, n);
          if (q < (1.0 - theta) * p || q > (1.0 + theta) * p) return false;
        }
  return true;
}

}  // namespace lowswitch
