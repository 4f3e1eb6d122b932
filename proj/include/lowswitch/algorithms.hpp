#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/episode.hpp"
#include "lowswitch/mdp.hpp"
#include "lowswitch/policy.hpp"
#include "lowswitch/policy_space.hpp"
#include "lowswitch/schedule.hpp"
#include "lowswitch/switching.hpp"
#include "lowswitch/tuple_set.hpp"

namespace lowswitch {

struct EliminationConfig {
  double delta = 0.1;
  /// Constant C of the elimination radius.
  double c_const = 1.0;
  /// Deploy uniform mixtures during exploration.
  bool mixture = false;

  /// Throws std::invalid_argument unless delta in (0,1) and C > 0.
  void validate() const;
};

/// 2C (sqrt(H^5 S^2 A iota / T) + S^3 A^2 H^5 iota / lower_T).
double elimination_radius(const PolicyShape& shape, double iota, double c_const, double t,
                          double lower_t);

struct StageRecord {
  std::uint32_t stage = 0;  // 1-based
  /// T^(k) as scheduled.
  std::uint64_t length = 0;
  /// Episodes actually consumed by the stage.
  std::uint64_t episodes = 0;
  std::uint64_t space_before = 0;
  std::uint64_t space_after = 0;
  double radius = 0.0;
  /// max over the stage's space of V^pi(r, P-hat).
  double best_estimate = 0.0;
  /// Cumulative quantities at the end of the stage.
  double cum_regret = 0.0;
  SwitchCounters counters;

  [[nodiscard]] std::uint64_t eliminated() const noexcept { return space_before - space_after; }
};

/// F, P^int and P-hat as produced by one stage (P^int is the one used for
/// planning, which APEVE+ reuses from stage 2 onwards).
struct KernelSnapshot {
  std::uint32_t stage = 0;
  TupleSet infrequent;
  TabularMDP intermediate;
  TabularMDP estimate;
};

struct LarfeSplit {
  std::uint64_t crude = 0;  // N0
  std::uint64_t fine = 0;   // N
};

struct ExperimentReport {
  std::string algorithm;
  PolicyShape shape;
  std::uint64_t budget = 0;
  double iota = 0.0;
  double optimal_value = 0.0;

  EpisodeTrace trace;
  /// V^{pi_k} of the policy deployed in episode k (mean member value for a
  /// mixture).
  std::vector<double> expected_values;
  /// Running sums of V* - V^{pi_k}.
  std::vector<double> cum_regret;
  /// Running switch counters per episode.
  std::vector<SwitchCounters> cum_switches;

  StageSchedule schedule;
  std::vector<StageRecord> stages;
  std::vector<KernelSnapshot> kernels;
  VersionSpace final_space;
  std::optional<LarfeSplit> larfe;
  /// Greedy policy deployed after exploration (Explore-First).
  std::optional<std::uint64_t> exploit_policy;

  [[nodiscard]] double total_regret() const { return cum_regret.empty() ? 0.0 : cum_regret.back(); }
  [[nodiscard]] SwitchCounters counters() const {
    return cum_switches.empty() ? SwitchCounters{} : cum_switches.back();
  }
};

/// Adaptive policy elimination. Each stage runs crude and fine exploration
/// with T^(k) episodes each over the current version space, then removes
/// every pi with V^pi(r, P-hat) <= max - radius(T^(k), T^(k)).
ExperimentReport run_apeve(const TabularMDP& env, std::uint64_t episodes,
                           const EliminationConfig& config, std::uint64_t seed);

/// APEVE+: stages 1 and 2 as APEVE; later stages reuse F and P^int of stage
/// 2, run fine exploration only and use radius(T^(k), T^(2)).
ExperimentReport run_apeve_plus(const TabularMDP& env, std::uint64_t episodes,
                                const EliminationConfig& config, std::uint64_t seed);

struct LarfeResult {
  TupleSet infrequent;
  TabularMDP intermediate;
  TabularMDP estimate;
  EpisodeTrace trace;
  double iota = 0.0;

  /// argmax over all deterministic policies of V^pi(reward, P-hat). Needs no
  /// further interaction with the environment.
  [[nodiscard]] OptimalSolution plan(const RewardFunction& reward) const;
};

/// Reward-free exploration over the full policy set: crude exploration with
/// `crude_episodes`, fine exploration with `fine_episodes`. iota uses
/// `iota_budget` episodes, which defaults to N0 + N.
LarfeResult run_larfe(const TabularMDP& env, std::uint64_t crude_episodes,
                      std::uint64_t fine_episodes, const EliminationConfig& config,
                      std::uint64_t seed, std::optional<std::uint64_t> iota_budget = {});

/// Even split: N0 = floor(K/2), N = K - N0.
LarfeSplit larfe_split(std::uint64_t episodes);

/// LARFE on the split of `episodes` reported as an experiment (regret of
/// the exploration episodes only).
ExperimentReport run_larfe_experiment(const TabularMDP& env, std::uint64_t episodes,
                                      const EliminationConfig& config, std::uint64_t seed);

/// K0 = floor(K^(2/3) H S^(2/3) A^(1/3)). Throws std::invalid_argument unless
/// 1 <= K0 < K.
std::uint64_t explore_first_budget(std::uint64_t episodes, const PolicyShape& shape);

/// LARFE for K0 episodes, then the greedy policy for the remaining K - K0.
ExperimentReport explore_first(const TabularMDP& env, std::uint64_t episodes,
                               const EliminationConfig& config, std::uint64_t seed);

/// Uniform mixture over the policies deployed in each episode; a mixture
/// episode contributes its members with equal shares.
StochasticPolicy pac_mixture_output(const EpisodeTrace& trace, const PolicyShape& shape);

/// Fills expected values, cumulative regret and cumulative switches of a
/// report whose trace is complete. Values use the reward of `env`.
void account_regret(ExperimentReport& report, const TabularMDP& env);

}  // namespace lowswitch
