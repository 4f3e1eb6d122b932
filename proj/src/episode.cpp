#include "lowswitch/episode.hpp"

#include "lowswitch/dynamic_programming.hpp"

namespace lowswitch {

double Trajectory::total_return() const {
  double total = 0.0;
  for (double r : rewards) total += r;
  return total;
}

Trajectory sample_episode(const DeterministicPolicy& policy, const TabularMDP& mdp,
                          CounterRng& rng) {
  check_policy_shape(policy, mdp);
  const std::size_t H = mdp.horizon();
  const std::size_t S = mdp.num_states();
  const std::size_t covered = policy.shape().states;
  Trajectory traj;
  traj.states.reserve(H + 1);
  traj.actions.reserve(H);
  traj.rewards.reserve(H);

  std::size_t s = mdp.initial_state();
  traj.states.push_back(static_cast<std::uint32_t>(s));
  for (std::size_t h = 0; h < H; ++h) {
    const std::size_t a = s < covered ? policy.action(h, s) : 0;
    traj.actions.push_back(static_cast<std::uint32_t>(a));
    traj.rewards.push_back(mdp.reward(h, s, a));

    // Inverse-CDF draw; falls back to the last positive entry when rounding
    // leaves u above the accumulated mass.
    const auto row = mdp.row(h, s, a);
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t next = S;
    std::size_t last_positive = 0;
    for (std::size_t n = 0; n < S; ++n) {
      if (row[n] <= 0.0) continue;
      last_positive = n;
      acc += row[n];
      if (u < acc) {
        next = n;
        break;
      }
    }
    s = next == S ? last_positive : next;
    traj.states.push_back(static_cast<std::uint32_t>(s));
  }
  return traj;
}

std::string_view phase_name(Phase phase) noexcept {
  switch (phase) {
    case Phase::Crude:
      return "crude";
    case Phase::Fine:
      return "fine";
    case Phase::Exploit:
      return "exploit";
  }
  return "unknown";
}

std::string PolicyRef::label() const {
  return is_mixture() ? "m" + std::to_string(id) : std::to_string(id);
}

std::uint64_t EpisodeTrace::add_mixture(std::vector<std::uint64_t> members) {
  mixtures_.push_back(std::move(members));
  return mixtures_.size() - 1;
}

void EpisodeTrace::append(const EpisodeTrace& other) {
  const std::uint64_t episode_offset = entries_.size();
  const std::uint64_t batch_offset = next_batch_;
  const std::uint64_t mixture_offset = mixtures_.size();
  entries_.reserve(entries_.size() + other.entries_.size());
  for (TraceEntry e : other.entries_) {
    e.episode += episode_offset;
    e.batch += batch_offset;
    if (e.policy.is_mixture()) e.policy.id += mixture_offset;
    entries_.push_back(e);
  }
  mixtures_.insert(mixtures_.end(), other.mixtures_.begin(), other.mixtures_.end());
  next_batch_ += other.next_batch_;
}

}  // namespace lowswitch
