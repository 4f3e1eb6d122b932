#include "lowswitch/exploration.hpp"

#include <stdexcept>
#include <string>

#include "lowswitch/errors.hpp"

namespace lowswitch {

ExplorationBudget ExplorationBudget::make(std::uint64_t total, std::uint64_t plans) {
  if (plans == 0) throw std::invalid_argument("exploration needs at least one planned policy");
  ExplorationBudget b;
  b.total = total;
  b.per_policy = total / plans;
  if (b.per_policy < 1) {
    throw BudgetError("exploration budget of " + std::to_string(total) +
                      " episodes gives fewer than one episode to each of " +
                      std::to_string(plans) + " planned policies");
  }
  b.leftover = total - b.per_policy * plans;
  return b;
}

namespace {

// Samples episodes into a dataset and records them in a trace. Every episode
// draws from stream.child({block, episode-within-block}).
class EpisodeRunner {
 public:
  EpisodeRunner(const TabularMDP& env, const CounterRng& stream, EpisodeTrace& trace,
                EpisodeDataset& data, std::uint32_t stage, Phase phase)
      : env_(env), stream_(stream), trace_(trace), data_(data), stage_(stage), phase_(phase) {}

  void run_policy(std::uint64_t block, std::uint64_t index, const DeterministicPolicy& policy,
                  std::uint64_t episodes, std::uint64_t batch) {
    for (std::uint64_t e = 0; e < episodes; ++e) {
      CounterRng rng = stream_.child({block, e});
      record(sample_episode(policy, env_, rng), index, PolicyRef::deterministic(index), batch);
    }
  }

  void run_mixture(std::uint64_t block, std::uint64_t mixture_id,
                   const std::vector<std::uint64_t>& indices,
                   const std::vector<DeterministicPolicy>& policies, std::uint64_t episodes,
                   std::uint64_t batch) {
    for (std::uint64_t e = 0; e < episodes; ++e) {
      CounterRng rng = stream_.child({block, e});
      const std::uint64_t pick = rng.below(policies.size());
      record(sample_episode(policies[pick], env_, rng), indices[pick],
             PolicyRef::mixture(mixture_id), batch);
    }
  }

 private:
  void record(Trajectory traj, std::uint64_t executed, PolicyRef deployed, std::uint64_t batch) {
    traj.episode_index = next_episode_;
    traj.policy_index = executed;
    trace_.push({next_episode_, stage_, phase_, deployed, batch, traj.total_return()});
    data_.push_back(std::move(traj));
    ++next_episode_;
  }

  const TabularMDP& env_;
  const CounterRng& stream_;
  EpisodeTrace& trace_;
  EpisodeDataset& data_;
  std::uint32_t stage_;
  Phase phase_;
  std::uint64_t next_episode_ = 0;
};

void check_inputs(const VersionSpace& space, const TabularMDP& env) {
  if (env.absorbing()) {
    throw std::invalid_argument("the environment must be an original (non-absorbing) MDP");
  }
  const PolicyShape expected{env.horizon(), env.num_states(), env.num_actions()};
  if (!(space.shape() == expected)) {
    throw std::invalid_argument("version space shape does not match the environment");
  }
  if (space.empty()) throw PreconditionError("exploration needs a non-empty version space");
}

BestPolicy plan_visit(const VersionSpace& space, const TabularMDP& kernel, std::size_t h,
                      std::size_t s, std::size_t a) {
  const auto reward = RewardFunction::indicator(kernel.horizon(), kernel.num_original_states(),
                                                kernel.num_actions(), h, s, a);
  return best_in_set(space, reward, kernel);
}

}  // namespace

CrudeResult crude_exploration(const VersionSpace& space, std::uint64_t episodes,
                              const TabularMDP& env, double iota, const CounterRng& stream,
                              const ExplorationOptions& options) {
  check_inputs(space, env);
  const std::size_t S = env.num_states();
  const std::size_t A = env.num_actions();
  const std::size_t H = env.horizon();
  const auto budget = ExplorationBudget::make(episodes, H * S * A);
  const double threshold = infrequent_threshold(H, iota);

  CrudeResult out{TupleSet(H, S, A), initial_estimate(S, A, H, env.initial_state()),
                  EpisodeTrace{}, std::vector<std::uint64_t>(H * S * A, 0), {}};
  EpisodeDataset layer_data;
  EpisodeRunner runner(env, stream, out.trace, layer_data, options.stage, Phase::Crude);

  for (std::size_t h = 0; h < H; ++h) {
    layer_data.clear();
    const std::uint64_t batch = out.trace.new_batch();
    const bool last_layer = h + 1 == H;

    std::vector<std::uint64_t> indices;
    std::vector<DeterministicPolicy> policies;
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        auto best = plan_visit(space, out.intermediate, h, s, a);
        out.planned[(h * S + s) * A + a] = best.index;
        indices.push_back(best.index);
        policies.push_back(std::move(best.policy));
      }
    }

    if (options.mixture) {
      const std::uint64_t id = out.trace.add_mixture(indices);
      const std::uint64_t n = budget.per_policy * S * A + (last_layer ? budget.leftover : 0);
      runner.run_mixture(h, id, indices, policies, n, batch);
    } else {
      for (std::size_t j = 0; j < policies.size(); ++j) {
        runner.run_policy(h * S * A + j, indices[j], policies[j], budget.per_policy, batch);
      }
      if (last_layer && budget.leftover > 0) {
        runner.run_policy(H * S * A, indices.back(), policies.back(), budget.leftover, batch);
      }
    }

    auto counts = count_layer(layer_data, h, S, A);
    out.infrequent = update_infrequent(std::move(out.infrequent), counts, h, threshold);
    out.intermediate = estimate_transition(counts, out.infrequent, h, out.intermediate);
    out.layer_counts.push_back(std::move(counts));
  }
  return out;
}

FineResult fine_exploration(const TupleSet& infrequent, const TabularMDP& intermediate,
                            std::uint64_t episodes, const VersionSpace& space,
                            const TabularMDP& env, const CounterRng& stream,
                            const ExplorationOptions& options) {
  check_inputs(space, env);
  const std::size_t S = env.num_states();
  const std::size_t A = env.num_actions();
  const std::size_t H = env.horizon();
  if (!intermediate.absorbing() || intermediate.num_original_states() != S ||
      intermediate.num_actions() != A || intermediate.horizon() != H) {
    throw std::invalid_argument("intermediate kernel does not match the environment");
  }
  const auto budget = ExplorationBudget::make(episodes, H * S * A);

  FineResult out{intermediate, EpisodeTrace{}, std::vector<std::uint64_t>(H * S * A, 0), {}};
  std::vector<DeterministicPolicy> policies;
  policies.reserve(H * S * A);
  for (std::size_t h = 0; h < H; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      for (std::size_t a = 0; a < A; ++a) {
        auto best = plan_visit(space, intermediate, h, s, a);
        out.planned[(h * S + s) * A + a] = best.index;
        policies.push_back(std::move(best.policy));
      }
    }
  }

  EpisodeDataset data;
  EpisodeRunner runner(env, stream, out.trace, data, options.stage, Phase::Fine);
  const std::uint64_t batch = out.trace.new_batch();
  if (options.mixture) {
    const std::uint64_t id = out.trace.add_mixture(out.planned);
    runner.run_mixture(0, id, out.planned, policies, budget.total, batch);
  } else {
    for (std::size_t j = 0; j < policies.size(); ++j) {
      runner.run_policy(j, out.planned[j], policies[j], budget.per_policy, batch);
    }
    if (budget.leftover > 0) {
      runner.run_policy(policies.size(), out.planned.back(), policies.back(), budget.leftover,
                        batch);
    }
  }

  for (std::size_t h = 0; h < H; ++h) {
    auto counts = count_layer(data, h, S, A);
    out.estimate = estimate_transition(counts, infrequent, h, out.estimate);
    out.layer_counts.push_back(std::move(counts));
  }
  return out;
}

}  // namespace lowswitch
