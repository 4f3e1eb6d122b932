#include "lowswitch/switching.hpp"

#include <string>

#include "lowswitch/errors.hpp"
#include "lowswitch/policy_space.hpp"

namespace lowswitch {

SwitchCounters count_switches(std::span<const DeterministicPolicy> deployed) {
  SwitchCounters c;
  if (deployed.empty()) return c;
  c.batches = 1;
  for (std::size_t k = 0; k + 1 < deployed.size(); ++k) {
    const std::size_t diff = deployed[k].differing_entries(deployed[k + 1]);
    if (diff != 0) {
      ++c.global;
      c.local += diff;
      ++c.batches;
    }
  }
  return c;
}

std::vector<SwitchCounters> cumulative_switches(const EpisodeTrace& trace,
                                                const PolicyShape& shape) {
  std::vector<SwitchCounters> out;
  const auto& entries = trace.entries();
  out.reserve(entries.size());
  if (entries.empty()) return out;
  SwitchCounters c;
  c.batches = 1;
  out.push_back(c);
  const std::uint64_t all_entries = shape.horizon * shape.states;
  for (std::size_t k = 1; k < entries.size(); ++k) {
    const auto& prev = entries[k - 1];
    const auto& cur = entries[k];
    if (!(prev.policy == cur.policy)) {
      ++c.global;
      if (prev.policy.is_mixture() || cur.policy.is_mixture()) {
        c.local += all_entries;
      } else {
        c.local += decode(prev.policy.id, shape).differing_entries(decode(cur.policy.id, shape));
      }
      if (prev.batch != cur.batch) ++c.batches;
    }
    out.push_back(c);
  }
  return out;
}

SwitchCounters count_switches(const EpisodeTrace& trace, const PolicyShape& shape) {
  const auto running = cumulative_switches(trace, shape);
  return running.empty() ? SwitchCounters{} : running.back();
}

void check_counters(const SwitchCounters& c, std::uint64_t episodes, const PolicyShape& shape) {
  const std::uint64_t cap = episodes == 0 ? 0 : episodes - 1;
  if (c.global > c.local) {
    throw InvariantViolation("switch counters: global (" + std::to_string(c.global) +
                             ") exceeds local (" + std::to_string(c.local) + ")");
  }
  if (c.global > cap) throw InvariantViolation("switch counters: global exceeds K-1");
  if (c.local > cap * shape.horizon * shape.states) {
    throw InvariantViolation("switch counters: local exceeds (K-1)*H*S");
  }
  if (c.batches > c.global + 1) {
    throw InvariantViolation("switch counters: batches exceed global + 1");
  }
}

}  // namespace lowswitch
