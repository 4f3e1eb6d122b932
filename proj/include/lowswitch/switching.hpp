#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "lowswitch/episode.hpp"
#include "lowswitch/policy.hpp"

namespace lowswitch {

struct SwitchCounters {
  /// Episodes k with pi_k != pi_{k+1}.
  std::uint64_t global = 0;
  /// Sum over k of the number of (h, s) entries where pi_k and pi_{k+1} differ.
  std::uint64_t local = 0;
  /// Deployment blocks that start with a policy change (plus the first one).
  std::uint64_t batches = 0;

  bool operator==(const SwitchCounters&) const = default;
};

/// Counters for a plain sequence of deployed policies; every maximal run of
/// one policy counts as its own block.
SwitchCounters count_switches(std::span<const DeterministicPolicy> deployed);

/// Counters for a recorded trace. A batch boundary in the trace only counts
/// when the deployed policy changes across it. A change that involves a
/// mixture adds H * S to the local count.
SwitchCounters count_switches(const EpisodeTrace& trace, const PolicyShape& shape);

/// Per-episode running counters: element k covers episodes 0..k.
std::vector<SwitchCounters> cumulative_switches(const EpisodeTrace& trace,
                                                const PolicyShape& shape);

/// Throws InvariantViolation unless global <= local, global <= K - 1,
/// local <= (K - 1) * H * S and batches <= global + 1.
void check_counters(const SwitchCounters& counters, std::uint64_t episodes,
                    const PolicyShape& shape);

}  // namespace lowswitch
