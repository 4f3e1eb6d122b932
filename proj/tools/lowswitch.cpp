// Command-line front end: run, sweep, schedule, hardmdp, validate-env.

#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lowswitch/envs.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/hard_instances.hpp"
#include "lowswitch/harness.hpp"
#include "lowswitch/io.hpp"
#include "lowswitch/schedule.hpp"

namespace {

using namespace lowswitch;
namespace fs = std::filesystem;

constexpr int kConfigError = 2;
constexpr int kInvariantError = 3;

struct CommonFlags {
  RunConfig config;
  std::string config_file;
};

void add_run_flags(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--algo", c.algorithm, "apeve | apeve-plus | larfe | explore-first");
  cmd->add_option("--env", c.env, "chain:S,H | random:S,A,H,SEED | hard:S,A,H[...] | file");
  cmd->add_option("--delta", c.delta, "confidence delta in (0,1)");
  cmd->add_option("--c-const", c.c_const, "constant C of the elimination radius");
  cmd->add_flag("--mixture", c.mixture, "deploy uniform mixtures during exploration");
}

int cmd_run(CommonFlags& flags) {
  RunConfig config = flags.config;
  if (!flags.config_file.empty()) {
    RunConfig file = RunConfig::from_json(nlohmann::json::parse(read_text_file(flags.config_file)));
    if (!config.out.empty()) file.out = config.out;
    config = file;
  }
  const RunOutput out = run_experiment(config);
  const auto c = out.report.counters();
  std::cout << "algorithm=" << out.report.algorithm << " episodes=" << out.report.trace.size()
            << " regret=" << format_real(out.report.total_regret()) << " global=" << c.global
            << " local=" << c.local << " batches=" << c.batches
            << " final_space=" << out.report.final_space.size() << '\n';
  return 0;
}

int cmd_sweep(const CommonFlags& flags, const std::vector<std::uint64_t>& episodes,
              const std::vector<std::uint64_t>& seeds, unsigned parallel) {
  std::vector<RunConfig> configs;
  if (!flags.config_file.empty()) {
    configs = expand_sweep(nlohmann::json::parse(read_text_file(flags.config_file)));
  } else {
    const std::vector<std::uint64_t> ks = episodes.empty()
                                              ? std::vector<std::uint64_t>{flags.config.episodes}
                                              : episodes;
    const std::vector<std::uint64_t> ss =
        seeds.empty() ? std::vector<std::uint64_t>{flags.config.seed} : seeds;
    for (auto k : ks) {
      for (auto s : ss) {
        RunConfig c = flags.config;
        c.episodes = k;
        c.seed = s;
        configs.push_back(c);
      }
    }
  }
  for (auto& c : configs) {
    c.out.clear();
    c.validate();
  }
  const auto rows = sweep(configs, parallel);
  const std::string table = aggregate_csv(rows);
  if (flags.config.out.empty()) {
    std::cout << table;
  } else {
    fs::create_directories(flags.config.out);
    write_text_file((fs::path(flags.config.out) / "aggregate.csv").string(), table);
    write_text_file((fs::path(flags.config.out) / "timing.csv").string(), timing_csv(rows));
    std::cout << "wrote " << rows.size() << " rows to " << flags.config.out << '\n';
  }
  return 0;
}

int cmd_schedule(std::uint64_t episodes, bool plus, const std::string& env) {
  std::uint64_t granularity = 1;
  if (!env.empty()) {
    const auto loaded = load_env(env);
    granularity = loaded.mdp.horizon() * loaded.mdp.num_states() * loaded.mdp.num_actions();
  }
  const StageSchedule s =
      plus ? stage_schedule_plus(episodes, granularity) : stage_schedule(episodes, granularity);
  for (std::size_t k = 0; k < s.lengths.size(); ++k) {
    std::cout << (k ? "," : "") << s.lengths[k];
  }
  std::cout << '\n';
  return 0;
}

int cmd_hardmdp(std::size_t states, std::size_t actions, std::size_t horizon,
                std::optional<std::size_t> problem, const std::vector<std::string>& arms,
                const std::string& out) {
  std::string body =
      std::to_string(states) + "," + std::to_string(actions) + "," + std::to_string(horizon);
  if (problem) body += "," + std::to_string(*problem);
  for (const auto& arm : arms) body += ";" + arm;
  const HardInstanceSpec spec = parse_hard_spec(body);
  const TabularMDP mdp = build_hard_mdp(spec);
  if (out.empty()) {
    nlohmann::json doc = {{"mdp", mdp_to_json(mdp)}, {"arms", arms_manifest(spec)}};
    std::cout << doc.dump(2) << '\n';
  } else {
    fs::create_directories(out);
    write_mdp_file((fs::path(out) / "mdp.json").string(), mdp);
    write_text_file((fs::path(out) / "arms.json").string(), arms_manifest(spec).dump(2) + "\n");
    std::cout << "wrote " << (fs::path(out) / "mdp.json").string() << " and arms.json\n";
  }
  return 0;
}

int cmd_validate(const std::string& env) {
  const auto loaded = load_env(env);
  std::cout << "ok states=" << loaded.mdp.num_states() << " actions=" << loaded.mdp.num_actions()
            << " horizon=" << loaded.mdp.horizon()
            << " initial_state=" << loaded.mdp.initial_state() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-switching-cost episodic RL laboratory"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  auto* run = app.add_subcommand("run", "run one experiment");
  add_run_flags(run, run_flags.config);
  run->add_option("--episodes", run_flags.config.episodes, "episode budget K");
  run->add_option("--seed", run_flags.config.seed, "64-bit run seed");
  run->add_option("--out", run_flags.config.out, "output directory");
  run->add_flag("--kernel-dump", run_flags.config.kernel_dump, "write kernel_dump.json");
  run->add_option("--config", run_flags.config_file, "JSON config (replaces the flags)");

  CommonFlags sweep_flags;
  std::vector<std::uint64_t> sweep_episodes;
  std::vector<std::uint64_t> sweep_seeds;
  unsigned parallel = 1;
  auto* sw = app.add_subcommand("sweep", "run a grid of experiments");
  add_run_flags(sw, sweep_flags.config);
  sw->add_option("--episodes", sweep_episodes, "episode budgets (repeatable)");
  sw->add_option("--seed", sweep_seeds, "seeds (repeatable)");
  sw->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--out", sweep_flags.config.out, "directory for aggregate.csv and timing.csv");
  sw->add_option("--config", sweep_flags.config_file, "JSON sweep file");

  std::uint64_t schedule_k = 0;
  bool schedule_plus = false;
  std::string schedule_env;
  auto* sched = app.add_subcommand("schedule", "print the stage schedule for K");
  sched->add_option("--episodes", schedule_k, "episode budget K")->required();
  sched->add_flag("--plus", schedule_plus, "APEVE+ truncation");
  sched->add_option("--env", schedule_env, "round stages to multiples of H*S*A of this env");

  std::size_t hs = 0, ha = 0, hh = 0;
  std::optional<std::size_t> problem;
  std::vector<std::string> arm_rewards;
  std::string hard_out;
  auto* hard = app.add_subcommand("hardmdp", "emit a lower-bound instance and its arms");
  hard->add_option("--states", hs, "S including the sink")->required();
  hard->add_option("--actions", ha, "A")->required();
  hard->add_option("--horizon", hh, "H")->required();
  hard->add_option("--problem", problem, "set arm K to reward 1");
  hard->add_option("--arm", arm_rewards, "arm reward h,s,a=v (repeatable)");
  hard->add_option("--out", hard_out, "directory for mdp.json and arms.json");

  std::string validate_env;
  auto* val = app.add_subcommand("validate-env", "load an env and check its invariants");
  val->add_option("--env", validate_env, "env source")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(run_flags);
    if (*sw) return cmd_sweep(sweep_flags, sweep_episodes, sweep_seeds, parallel);
    if (*sched) return cmd_schedule(schedule_k, schedule_plus, schedule_env);
    if (*hard) return cmd_hardmdp(hs, ha, hh, problem, arm_rewards, hard_out);
    if (*val) return cmd_validate(validate_env);
  } catch (const InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantError;
  } catch (const PreconditionError& e) {
    std::cerr << "invariant violation: " << e.what() << '\n';
    return kInvariantError;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}
