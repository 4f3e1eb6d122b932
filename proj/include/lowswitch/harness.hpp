#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"
#include "lowswitch/algorithms.hpp"
#include "lowswitch/mdp.hpp"

namespace lowswitch {

/// One experiment. Serializes to and from the `config` block of summary.json.
struct RunConfig {
  std::string algorithm = "apeve";  // apeve | apeve-plus | larfe | explore-first
  std::string env = "random:2,2,3,1";
  std::uint64_t episodes = 4096;
  double delta = 0.1;
  double c_const = 1.0;
  std::uint64_t seed = 0;
  bool mixture = false;
  /// Output directory; empty means nothing is written.
  std::string out;
  bool kernel_dump = false;

  /// Throws std::invalid_argument on an unknown algorithm, K odd or < 4 for
  /// the elimination algorithms, delta outside (0,1) or C <= 0.
  void validate() const;

  [[nodiscard]] nlohmann::json to_json() const;
  static RunConfig from_json(const nlohmann::json& doc);

  bool operator==(const RunConfig&) const = default;
};

/// Runs the configured algorithm on an already loaded environment.
ExperimentReport execute(const RunConfig& config, const TabularMDP& env);

struct RunOutput {
  ExperimentReport report;
  double seconds = 0.0;
};

/// Loads the env, runs, and when config.out is set writes trace.csv,
/// summary.json and (if requested) kernel_dump.json into it.
RunOutput run_experiment(const RunConfig& config);

/// episode,stage,phase,policy_id,expected_value,instant_regret,cum_regret,
/// global_switch_cum,return
std::string trace_csv(const ExperimentReport& report);

nlohmann::json summary_json(const ExperimentReport& report, const RunConfig& config,
                            double seconds);

/// FNV-1a over the canonical JSON of the config without its output fields.
std::uint64_t config_hash(const RunConfig& config);

struct SweepRow {
  RunConfig config;
  bool ok = false;
  std::string error;
  double regret = 0.0;
  SwitchCounters counters;
  std::uint64_t final_space = 0;
  double seconds = 0.0;
};

/// Runs every config on `parallelism` worker threads. Rows come back in
/// input order and a failing run is recorded in its row.
std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs, unsigned parallelism);

/// config_hash,algorithm,env,episodes,seed,c_const,delta,mixture,status,regret,
/// global_switches,local_switches,batches,final_space. Free of timings, so it
/// does not depend on the degree of parallelism.
std::string aggregate_csv(const std::vector<SweepRow>& rows);
/// config_hash,seconds
std::string timing_csv(const std::vector<SweepRow>& rows);

/// Expands {"base": {...}, "grid": {"field": [values], ...}} into configs,
/// varying the grid field that sorts last fastest. A plain array of configs is
/// also accepted.
std::vector<RunConfig> expand_sweep(const nlohmann::json& doc);

}  // namespace lowswitch
