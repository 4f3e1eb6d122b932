#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "lowswitch/mdp.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/rng.hpp"

namespace lowswitch {

/// One episode: states s_1..s_{H+1}, actions a_1..a_H, rewards r_1..r_H.
struct Trajectory {
  std::vector<std::uint32_t> states;
  std::vector<std::uint32_t> actions;
  std::vector<double> rewards;
  std::uint64_t episode_index = 0;
  /// Index of the deterministic policy that generated the episode.
  std::uint64_t policy_index = 0;

  [[nodiscard]] double total_return() const;
  [[nodiscard]] std::size_t horizon() const noexcept { return actions.size(); }
};

using EpisodeDataset = std::vector<Trajectory>;

/// Draws one trajectory. Consumes exactly H uniforms from `rng`, so the same
/// stream state always yields the same trajectory.
Trajectory sample_episode(const DeterministicPolicy& policy, const TabularMDP& mdp,
                          CounterRng& rng);

enum class Phase : std::uint8_t { Crude, Fine, Exploit };

std::string_view phase_name(Phase phase) noexcept;

/// Identity of a deployed policy: either a deterministic policy index or a
/// mixture registered in the owning trace.
struct PolicyRef {
  enum class Kind : std::uint8_t { Deterministic, Mixture };
  Kind kind = Kind::Deterministic;
  std::uint64_t id = 0;

  static PolicyRef deterministic(std::uint64_t index) { return {Kind::Deterministic, index}; }
  static PolicyRef mixture(std::uint64_t id) { return {Kind::Mixture, id}; }
  [[nodiscard]] bool is_mixture() const noexcept { return kind == Kind::Mixture; }
  /// "17" for a deterministic policy, "m3" for mixture 3.
  [[nodiscard]] std::string label() const;

  bool operator==(const PolicyRef&) const = default;
};

struct TraceEntry {
  std::uint64_t episode = 0;
  std::uint32_t stage = 0;
  Phase phase = Phase::Crude;
  PolicyRef policy;
  /// Pre-declared deployment block this episode belongs to.
  std::uint64_t batch = 0;
  /// Realized return of the sampled trajectory.
  double realized_return = 0.0;
};

/// Ordered record of deployed episodes. Mixture policies are registered by
/// id as uniform mixtures over deterministic policy indices.
class EpisodeTrace {
 public:
  void push(TraceEntry entry) { entries_.push_back(entry); }
  /// Registers a uniform mixture and returns its id.
  std::uint64_t add_mixture(std::vector<std::uint64_t> members);
  /// Opens a new deployment block and returns its id.
  std::uint64_t new_batch() { return next_batch_++; }

  /// Appends `other`, renumbering its episodes, batches and mixtures so they
  /// follow this trace.
  void append(const EpisodeTrace& other);

  [[nodiscard]] const std::vector<TraceEntry>& entries() const noexcept { return entries_; }
  [[nodiscard]] const std::vector<std::vector<std::uint64_t>>& mixtures() const noexcept {
    return mixtures_;
  }
  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] std::uint64_t batches_declared() const noexcept { return next_batch_; }

 private:
  std::vector<TraceEntry> entries_;
  std::vector<std::vector<std::uint64_t>> mixtures_;
  std::uint64_t next_batch_ = 0;
};

}  // namespace lowswitch
