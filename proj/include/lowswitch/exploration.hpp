#pragma once

#include <cstdint>
#include <vector>

#include "lowswitch/episode.hpp"
#include "lowswitch/estimation.hpp"
#include "lowswitch/mdp.hpp"
#include "lowswitch/policy_space.hpp"
#include "lowswitch/rng.hpp"
#include "lowswitch/tuple_set.hpp"

namespace lowswitch {

/// Episode split for one exploration call: each of the H*S*A planned
/// policies runs `per_policy` episodes and the last one also runs the
/// `leftover` episodes.
struct ExplorationBudget {
  std::uint64_t total = 0;
  std::uint64_t per_policy = 0;
  std::uint64_t leftover = 0;

  /// Throws BudgetError when total / plans < 1.
  static ExplorationBudget make(std::uint64_t total, std::uint64_t plans);
};

struct ExplorationOptions {
  /// Deploy per-layer uniform mixtures (crude) or one mixture (fine) instead
  /// of a sequence of deterministic policies.
  bool mixture = false;
  /// Stage number written into the trace.
  std::uint32_t stage = 0;
};

struct CrudeResult {
  TupleSet infrequent;
  /// P^int, an absorbing kernel over S + 1 states.
  TabularMDP intermediate;
  EpisodeTrace trace;
  /// Index of pi_{h,s,a}, flattened (h * S + s) * A + a.
  std::vector<std::uint64_t> planned;
  /// Counts of layer h taken from the episodes collected for layer h.
  std::vector<LayerCounts> layer_counts;
};

struct FineResult {
  /// P-hat, an absorbing kernel over S + 1 states.
  TabularMDP estimate;
  EpisodeTrace trace;
  std::vector<std::uint64_t> planned;
  /// Counts over the pooled fine-exploration dataset.
  std::vector<LayerCounts> layer_counts;
};

/// Layer-by-layer exploration that builds the infrequent set F and the
/// intermediate kernel P^int. `env` is only sampled, never read.
///
/// For each layer h the policies pi_{h,s,a} are planned against the current
/// P^int with indicator rewards, each is run for T / (H*S*A) episodes, and
/// the layer-h counts update F (threshold 6 H^2 iota) and layer h of P^int.
CrudeResult crude_exploration(const VersionSpace& space, std::uint64_t episodes,
                              const TabularMDP& env, double iota, const CounterRng& stream,
                              const ExplorationOptions& options = {});

/// Plans all H*S*A policies against the frozen P^int, runs each for
/// T / (H*S*A) episodes and re-estimates every layer from the pooled data,
/// starting from P-hat = P^int.
FineResult fine_exploration(const TupleSet& infrequent, const TabularMDP& intermediate,
                            std::uint64_t episodes, const VersionSpace& space,
                            const TabularMDP& env, const CounterRng& stream,
                            const ExplorationOptions& options = {});

}  // namespace lowswitch
