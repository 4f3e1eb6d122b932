#include "lowswitch/algorithms.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "lowswitch/errors.hpp"
#include "lowswitch/estimation.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/rng.hpp"

namespace lowswitch {

void EliminationConfig::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) {
    throw std::invalid_argument("delta must lie in (0,1), got " + std::to_string(delta));
  }
  if (!(c_const > 0.0) || !std::isfinite(c_const)) {
    throw std::invalid_argument("C must be a positive finite number");
  }
}

double elimination_radius(const PolicyShape& shape, double iota, double c_const, double t,
                          double lower_t) {
  if (!(t > 0.0) || !(lower_t > 0.0)) {
    throw std::invalid_argument("elimination radius needs positive stage lengths");
  }
  const double H = static_cast<double>(shape.horizon);
  const double S = static_cast<double>(shape.states);
  const double A = static_cast<double>(shape.actions);
  const double h5 = std::pow(H, 5);
  return 2.0 * c_const *
         (std::sqrt(h5 * S * S * A * iota / t) + S * S * S * A * A * h5 * iota / lower_t);
}

namespace {

PolicyShape shape_of(const TabularMDP& env) {
  if (env.absorbing()) throw std::invalid_argument("the environment must not be absorbing");
  return {env.horizon(), env.num_states(), env.num_actions()};
}

// Exact value of deployed policies, cached by index.
class ValueCache {
 public:
  ValueCache(const TabularMDP& env, const PolicyShape& shape) : env_(env), shape_(shape) {}

  double operator()(std::uint64_t index) {
    auto it = cache_.find(index);
    if (it != cache_.end()) return it->second;
    const double v = value_of_policy(decode(index, shape_), env_.reward_function(), env_);
    cache_.emplace(index, v);
    return v;
  }

 private:
  const TabularMDP& env_;
  PolicyShape shape_;
  std::unordered_map<std::uint64_t, double> cache_;
};

struct EliminationOutcome {
  VersionSpace space;
  double best = 0.0;
};

// Removes every member whose value under the estimate is <= max - radius.
EliminationOutcome eliminate_by_value(const VersionSpace& space, const TabularMDP& estimate,
                                      const RewardFunction& reward, double radius) {
  std::unordered_map<std::uint64_t, double> values;
  values.reserve(space.size());
  double best = -std::numeric_limits<double>::infinity();
  space.for_each([&](std::uint64_t index) {
    const double v = value_of_policy(decode(index, space.shape()), reward, estimate);
    values.emplace(index, v);
    if (v > best) best = v;
  });
  const double cutoff = best - radius;
  auto next = eliminate(space, [&](std::uint64_t index, const DeterministicPolicy&) {
    return values.at(index) <= cutoff;
  });
  if (next.empty()) {
    throw InvariantViolation("elimination emptied the version space");
  }
  return {std::move(next), best};
}

void fill_stage_totals(ExperimentReport& report) {
  std::uint64_t end = 0;
  for (auto& record : report.stages) {
    end += record.episodes;
    if (end == 0) continue;
    record.cum_regret = report.cum_regret.at(end - 1);
    record.counters = report.cum_switches.at(end - 1);
  }
}

ExperimentReport run_elimination(const TabularMDP& env, std::uint64_t episodes,
                                 const EliminationConfig& config, std::uint64_t seed,
                                 bool plus) {
  config.validate();
  const PolicyShape shape = shape_of(env);
  const std::uint64_t granularity = shape.horizon * shape.states * shape.actions;

  ExperimentReport report;
  report.algorithm = plus ? "apeve-plus" : "apeve";
  report.shape = shape;
  report.budget = episodes;
  report.schedule = plus ? stage_schedule_plus(episodes, granularity)
                         : stage_schedule(episodes, granularity);
  report.iota = confidence_log(shape.horizon, shape.actions, episodes, config.delta);

  const CounterRng root = CounterRng::from_seed(seed);
  const RewardFunction& reward = env.reward_function();
  VersionSpace space = VersionSpace::full(shape);
  std::optional<CrudeResult> frozen;  // stage-2 crude output for APEVE+

  for (std::size_t k = 0; k < report.schedule.stage_count(); ++k) {
    const std::uint64_t t = report.schedule.lengths[k];
    const auto stage_id = static_cast<std::uint32_t>(k + 1);
    const CounterRng stream = root.child(k);
    const ExplorationOptions options{config.mixture, stage_id};

    StageRecord record;
    record.stage = stage_id;
    record.length = t;
    record.space_before = space.size();

    const bool reuse = plus && k >= 2;
    std::optional<CrudeResult> crude;
    if (!reuse) {
      crude = crude_exploration(space, t, env, report.iota, stream.child(0), options);
      report.trace.append(crude->trace);
    }
    const CrudeResult& planning = reuse ? *frozen : *crude;
    FineResult fine = fine_exploration(planning.infrequent, planning.intermediate, t, space, env,
                                       stream.child(1), options);
    report.trace.append(fine.trace);
    record.episodes = reuse ? t : 2 * t;

    const double lower = reuse ? static_cast<double>(report.schedule.lengths[1])
                               : static_cast<double>(t);
    record.radius = elimination_radius(shape, report.iota, config.c_const,
                                       static_cast<double>(t), lower);
    auto outcome = eliminate_by_value(space, fine.estimate, reward, record.radius);
    record.best_estimate = outcome.best;
    space = std::move(outcome.space);
    record.space_after = space.size();

    report.kernels.push_back(
        {stage_id, planning.infrequent, planning.intermediate, std::move(fine.estimate)});
    report.stages.push_back(record);
    if (plus && k == 1) frozen = std::move(crude);
  }

  report.final_space = std::move(space);
  account_regret(report, env);
  fill_stage_totals(report);
  return report;
}

}  // namespace

ExperimentReport run_apeve(const TabularMDP& env, std::uint64_t episodes,
                           const EliminationConfig& config, std::uint64_t seed) {
  return run_elimination(env, episodes, config, seed, false);
}

ExperimentReport run_apeve_plus(const TabularMDP& env, std::uint64_t episodes,
                                const EliminationConfig& config, std::uint64_t seed) {
  return run_elimination(env, episodes, config, seed, true);
}

OptimalSolution LarfeResult::plan(const RewardFunction& reward) const {
  return optimal_value_and_policy(reward, estimate);
}

LarfeResult run_larfe(const TabularMDP& env, std::uint64_t crude_episodes,
                      std::uint64_t fine_episodes, const EliminationConfig& config,
                      std::uint64_t seed, std::optional<std::uint64_t> iota_budget) {
  config.validate();
  const PolicyShape shape = shape_of(env);
  const VersionSpace space = VersionSpace::full(shape);
  const double iota = confidence_log(shape.horizon, shape.actions,
                                     iota_budget.value_or(crude_episodes + fine_episodes),
                                     config.delta);
  const CounterRng stream = CounterRng::from_seed(seed).child(0);
  const ExplorationOptions options{config.mixture, 1};

  CrudeResult crude = crude_exploration(space, crude_episodes, env, iota, stream.child(0), options);
  FineResult fine = fine_exploration(crude.infrequent, crude.intermediate, fine_episodes, space,
                                     env, stream.child(1), options);
  LarfeResult out{std::move(crude.infrequent), std::move(crude.intermediate),
                  std::move(fine.estimate), std::move(crude.trace), iota};
  out.trace.append(fine.trace);
  return out;
}

LarfeSplit larfe_split(std::uint64_t episodes) {
  const std::uint64_t n0 = episodes / 2;
  if (n0 == 0) {
    throw BudgetError("budget of " + std::to_string(episodes) + " episodes is too small to split");
  }
  return {n0, episodes - n0};
}

namespace {

ExperimentReport larfe_report(const TabularMDP& env, const LarfeResult& larfe,
                              const LarfeSplit& split, std::uint64_t budget) {
  ExperimentReport report;
  report.shape = shape_of(env);
  report.budget = budget;
  report.iota = larfe.iota;
  report.trace = larfe.trace;
  report.larfe = split;
  report.schedule.budget = split.crude + split.fine;
  report.schedule.lengths = {split.crude, split.fine};
  report.final_space = VersionSpace::full(report.shape);
  report.kernels.push_back({1, larfe.infrequent, larfe.intermediate, larfe.estimate});
  StageRecord record;
  record.stage = 1;
  record.length = split.crude + split.fine;
  record.episodes = split.crude + split.fine;
  record.space_before = record.space_after = report.final_space.size();
  record.best_estimate = larfe.plan(env.reward_function()).value;
  report.stages.push_back(record);
  return report;
}

}  // namespace

ExperimentReport run_larfe_experiment(const TabularMDP& env, std::uint64_t episodes,
                                      const EliminationConfig& config, std::uint64_t seed) {
  const LarfeSplit split = larfe_split(episodes);
  const LarfeResult larfe = run_larfe(env, split.crude, split.fine, config, seed);
  ExperimentReport report = larfe_report(env, larfe, split, episodes);
  report.algorithm = "larfe";
  account_regret(report, env);
  fill_stage_totals(report);
  return report;
}

std::uint64_t explore_first_budget(std::uint64_t episodes, const PolicyShape& shape) {
  const long double k = static_cast<long double>(episodes);
  const long double value = std::pow(k, 2.0L / 3.0L) * static_cast<long double>(shape.horizon) *
                            std::pow(static_cast<long double>(shape.states), 2.0L / 3.0L) *
                            std::pow(static_cast<long double>(shape.actions), 1.0L / 3.0L);
  const auto k0 = static_cast<std::uint64_t>(std::floor(value * (1.0L + 1e-12L)));
  if (k0 < 1 || k0 >= episodes) {
    throw std::invalid_argument("explore-first needs 1 <= K0 < K; K=" + std::to_string(episodes) +
                                " gives K0=" + std::to_string(k0));
  }
  return k0;
}

ExperimentReport explore_first(const TabularMDP& env, std::uint64_t episodes,
                               const EliminationConfig& config, std::uint64_t seed) {
  const PolicyShape shape = shape_of(env);
  const std::uint64_t k0 = explore_first_budget(episodes, shape);
  const LarfeSplit split = larfe_split(k0);
  const LarfeResult larfe = run_larfe(env, split.crude, split.fine, config, seed, episodes);

  ExperimentReport report = larfe_report(env, larfe, split, episodes);
  report.algorithm = "explore-first";

  const OptimalSolution greedy = larfe.plan(env.reward_function());
  const std::uint64_t index = encode(greedy.policy);
  report.exploit_policy = index;

  EpisodeTrace exploit;
  const std::uint64_t batch = exploit.new_batch();
  const CounterRng stream = CounterRng::from_seed(seed).child(1);
  for (std::uint64_t e = 0; e < episodes - k0; ++e) {
    CounterRng rng = stream.child({0, e});
    const Trajectory traj = sample_episode(greedy.policy, env, rng);
    exploit.push({e, 2, Phase::Exploit, PolicyRef::deterministic(index), batch,
                  traj.total_return()});
  }
  report.trace.append(exploit);

  StageRecord record;
  record.stage = 2;
  record.length = episodes - k0;
  record.episodes = episodes - k0;
  record.space_before = record.space_after = report.final_space.size();
  record.best_estimate = greedy.value;
  report.stages.push_back(record);

  account_regret(report, env);
  fill_stage_totals(report);
  return report;
}

StochasticPolicy pac_mixture_output(const EpisodeTrace& trace, const PolicyShape& shape) {
  if (trace.empty()) throw PreconditionError("the mixture output needs a non-empty trace");
  std::map<std::uint64_t, double> weights;
  const double share = 1.0 / static_cast<double>(trace.size());
  for (const auto& entry : trace.entries()) {
    if (entry.policy.is_mixture()) {
      const auto& members = trace.mixtures().at(entry.policy.id);
      const double part = share / static_cast<double>(members.size());
      for (std::uint64_t index : members) weights[index] += part;
    } else {
      weights[entry.policy.id] += share;
    }
  }
  std::vector<StochasticPolicy::Member> members;
  members.reserve(weights.size());
  double total = 0.0;
  for (const auto& [index, w] : weights) total += w;
  for (const auto& [index, w] : weights) members.emplace_back(w / total, decode(index, shape));
  return StochasticPolicy(std::move(members));
}

void account_regret(ExperimentReport& report, const TabularMDP& env) {
  const PolicyShape shape = shape_of(env);
  report.optimal_value = optimal_value_and_policy(env.reward_function(), env).value;
  ValueCache values(env, shape);

  std::vector<double> mixture_values;
  for (const auto& members : report.trace.mixtures()) {
    double sum = 0.0;
    for (std::uint64_t index : members) sum += values(index);
    mixture_values.push_back(sum / static_cast<double>(members.size()));
  }

  const auto& entries = report.trace.entries();
  report.expected_values.assign(entries.size(), 0.0);
  report.cum_regret.assign(entries.size(), 0.0);
  double running = 0.0;
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& ref = entries[k].policy;
    const double v = ref.is_mixture() ? mixture_values.at(ref.id) : values(ref.id);
    report.expected_values[k] = v;
    running += report.optimal_value - v;
    report.cum_regret[k] = running;
  }
  report.cum_switches = cumulative_switches(report.trace, shape);
  if (!report.cum_switches.empty()) {
    check_counters(report.cum_switches.back(), entries.size(), shape);
  }
}

}  // namespace lowswitch
