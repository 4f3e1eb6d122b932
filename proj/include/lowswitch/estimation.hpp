#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "lowswitch/episode.hpp"
#include "lowswitch/mdp.hpp"
#include "lowswitch/tuple_set.hpp"

namespace lowswitch {

/// Multiplier C1 in the infrequent-tuple threshold C1 * H^2 * iota.
inline constexpr double kInfrequentMultiplier = 6.0;

/// Visit counts N_h(s,a,s') and N_h(s,a) for one layer h.
class LayerCounts {
 public:
  LayerCounts() = default;
  LayerCounts(std::size_t h, std::size_t states, std::size_t actions);

  void add(std::size_t s, std::size_t a, std::size_t next, std::uint64_t n = 1);

  [[nodiscard]] std::uint64_t count(std::size_t s, std::size_t a, std::size_t next) const {
    return next_counts_[(s * actions_ + a) * states_ + next];
  }
  [[nodiscard]] std::uint64_t count(std::size_t s, std::size_t a) const {
    return pair_counts_[s * actions_ + a];
  }
  [[nodiscard]] std::size_t layer() const noexcept { return h_; }
  [[nodiscard]] std::size_t states() const noexcept { return states_; }
  [[nodiscard]] std::size_t actions() const noexcept { return actions_; }

  bool operator==(const LayerCounts&) const = default;

 private:
  std::size_t h_ = 0;
  std::size_t states_ = 0;
  std::size_t actions_ = 0;
  std::vector<std::uint64_t> next_counts_;
  std::vector<std::uint64_t> pair_counts_;
};

/// Tallies layer h of every trajectory in the dataset. Trajectories shorter
/// than h + 1 steps throw std::invalid_argument.
LayerCounts count_layer(const EpisodeDataset& dataset, std::size_t h, std::size_t states,
                        std::size_t actions);

/// iota = log(2 * H * A * K / delta).
double confidence_log(std::size_t horizon, std::size_t actions, std::uint64_t episodes,
                      double delta);

/// C1 * H^2 * iota with C1 = 6. Throws std::invalid_argument for iota <= 0.
double infrequent_threshold(std::size_t horizon, double iota);

/// F with every (h, s, a, s') such that N_h(s,a,s') <= threshold added.
TupleSet update_infrequent(TupleSet infrequent, const LayerCounts& counts, std::size_t h,
                           double threshold);

/// Absorbing kernel over S + 1 states: uniform over original states at every
/// (h, s, a), absorbing state self-loops. Reward is zero.
TabularMDP initial_estimate(std::size_t states, std::size_t actions, std::size_t horizon,
                            std::size_t initial_state);

/// Replaces layer h of `base` with the empirical estimate. Tuples in F get
/// probability 0, other tuples N_h(s,a,s') / N_h(s,a), and the absorbing
/// state receives the remaining mass. A pair with N_h(s,a) = 0 whose tuples
/// are all in F is sent to the absorbing state; if some tuple is outside F
/// the row of `base` is kept. Other layers are copied unchanged.
TabularMDP estimate_transition(const LayerCounts& counts, const TupleSet& infrequent,
                               std::size_t h, const TabularMDP& base);

/// (1 - theta) P'(s'|s,a) <= P''(s'|s,a) <= (1 + theta) P'(s'|s,a) for all
/// original destinations s'; the absorbing column is exempt. Both kernels
/// must be absorbing with the same shape.
bool check_multiplicative_accuracy(const TabularMDP& reference, const TabularMDP& candidate,
                                   double theta);

}  // namespace lowswitch
