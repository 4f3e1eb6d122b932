#include "lowswitch/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "lowswitch/envs.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/io.hpp"

namespace lowswitch {

using nlohmann::json;

namespace {

bool is_elimination(const std::string& algo) { return algo == "apeve" || algo == "apeve-plus"; }

}  // namespace

void RunConfig::validate() const {
  if (algorithm != "apeve" && algorithm != "apeve-plus" && algorithm != "larfe" &&
      algorithm != "explore-first") {
    throw std::invalid_argument("unknown algorithm '" + algorithm +
                                "' (expected apeve, apeve-plus, larfe or explore-first)");
  }
  if (is_elimination(algorithm) && (episodes < 4 || episodes % 2 != 0)) {
    throw std::invalid_argument("K must be even and >= 4 for " + algorithm);
  }
  if (episodes < 2) throw std::invalid_argument("K must be at least 2");
  EliminationConfig{delta, c_const, mixture}.validate();
  if (env.empty()) throw std::invalid_argument("env source is empty");
}

json RunConfig::to_json() const {
  return {{"algorithm", algorithm}, {"env", env},         {"episodes", episodes},
          {"delta", delta},         {"c_const", c_const}, {"seed", seed},
          {"mixture", mixture},     {"out", out},         {"kernel_dump", kernel_dump}};
}

RunConfig RunConfig::from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  RunConfig c;
  try {
    for (const auto& [key, value] : doc.items()) {
      if (key == "algorithm") c.algorithm = value.get<std::string>();
      else if (key == "env") c.env = value.get<std::string>();
      else if (key == "episodes") c.episodes = value.get<std::uint64_t>();
      else if (key == "delta") c.delta = value.get<double>();
      else if (key == "c_const") c.c_const = value.get<double>();
      else if (key == "seed") c.seed = value.get<std::uint64_t>();
      else if (key == "mixture") c.mixture = value.get<bool>();
      else if (key == "out") c.out = value.get<std::string>();
      else if (key == "kernel_dump") c.kernel_dump = value.get<bool>();
      else throw std::invalid_argument("unknown config field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("bad config value: ") + e.what());
  }
  return c;
}

ExperimentReport execute(const RunConfig& config, const TabularMDP& env) {
  config.validate();
  const EliminationConfig elim{config.delta, config.c_const, config.mixture};
  if (config.algorithm == "apeve") return run_apeve(env, config.episodes, elim, config.seed);
  if (config.algorithm == "apeve-plus") {
    return run_apeve_plus(env, config.episodes, elim, config.seed);
  }
  if (config.algorithm == "larfe") {
    return run_larfe_experiment(env, config.episodes, elim, config.seed);
  }
  return explore_first(env, config.episodes, elim, config.seed);
}

std::string trace_csv(const ExperimentReport& report) {
  std::string out =
      "episode,stage,phase,policy_id,expected_value,instant_regret,cum_regret,"
      "global_switch_cum,return\n";
  const auto& entries = report.trace.entries();
  out.reserve(entries.size() * 96);
  for (std::size_t k = 0; k < entries.size(); ++k) {
    const auto& e = entries[k];
    out += std::to_string(e.episode);
    out += ',';
    out += std::to_string(e.stage);
    out += ',';
    out += phase_name(e.phase);
    out += ',';
    out += e.policy.label();
    out += ',';
    out += format_real(report.expected_values.at(k));
    out += ',';
    out += format_real(report.optimal_value - report.expected_values[k]);
    out += ',';
    out += format_real(report.cum_regret.at(k));
    out += ',';
    out += std::to_string(report.cum_switches.at(k).global);
    out += ',';
    out += format_real(e.realized_return);
    out += '\n';
  }
  return out;
}

namespace {

json counters_json(const SwitchCounters& c) {
  return {{"global", c.global}, {"local", c.local}, {"batches", c.batches}};
}

}  // namespace

json summary_json(const ExperimentReport& report, const RunConfig& config, double seconds) {
  json stages = json::array();
  for (const auto& s : report.stages) {
    stages.push_back({{"stage", s.stage},
                      {"length", s.length},
                      {"episodes", s.episodes},
                      {"space_before", s.space_before},
                      {"space_after", s.space_after},
                      {"eliminated", s.eliminated()},
                      {"radius", s.radius},
                      {"best_estimate", s.best_estimate},
                      {"cum_regret", s.cum_regret},
                      {"counters", counters_json(s.counters)}});
  }
  json doc = {{"config", config.to_json()},
              {"algorithm", report.algorithm},
              {"shape",
               {{"states", report.shape.states},
                {"actions", report.shape.actions},
                {"horizon", report.shape.horizon}}},
              {"budget", report.budget},
              {"episodes", report.trace.size()},
              {"iota", report.iota},
              {"optimal_value", report.optimal_value},
              {"total_regret", report.total_regret()},
              {"counters", counters_json(report.counters())},
              {"schedule", report.schedule.lengths},
              {"stage_count", report.schedule.stage_count()},
              {"stages", std::move(stages)},
              {"final_space_size", report.final_space.size()},
              {"wall_clock_seconds", seconds}};
  if (report.final_space.size() <= 1024) doc["final_space"] = report.final_space.members();
  if (report.larfe) {
    doc["larfe_split"] = {{"rule", "N0 = floor(K/2), N = K - N0"},
                          {"n0", report.larfe->crude},
                          {"n", report.larfe->fine}};
  }
  if (report.exploit_policy) {
    doc["exploit_policy"] = {{"index", *report.exploit_policy},
                             {"table", decode(*report.exploit_policy, report.shape).table()}};
  }
  return doc;
}

RunOutput run_experiment(const RunConfig& config) {
  config.validate();
  const LoadedEnv env = load_env(config.env);
  const auto start = std::chrono::steady_clock::now();
  RunOutput out{execute(config, env.mdp), 0.0};
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  if (!config.out.empty()) {
    std::error_code ec;
    std::filesystem::create_directories(config.out, ec);
    if (ec) throw std::runtime_error("cannot create '" + config.out + "': " + ec.message());
    const std::filesystem::path dir(config.out);
    write_text_file((dir / "trace.csv").string(), trace_csv(out.report));
    write_text_file((dir / "summary.json").string(),
                    summary_json(out.report, config, out.seconds).dump(2) + "\n");
    if (config.kernel_dump) {
      write_text_file((dir / "kernel_dump.json").string(),
                      kernel_dump(out.report.kernels).dump(1) + "\n");
    }
  }
  return out;
}

std::uint64_t config_hash(const RunConfig& config) {
  RunConfig key = config;
  key.out.clear();
  key.kernel_dump = false;
  const std::string text = key.to_json().dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<SweepRow> sweep(const std::vector<RunConfig>& configs, unsigned parallelism) {
  std::vector<SweepRow> rows(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      SweepRow& row = rows[i];
      row.config = configs[i];
      try {
        const RunOutput out = run_experiment(configs[i]);
        row.ok = true;
        row.regret = out.report.total_regret();
        row.counters = out.report.counters();
        row.final_space = out.report.final_space.size();
        row.seconds = out.seconds;
      } catch (const std::exception& e) {
        row.ok = false;
        row.error = e.what();
      }
    }
  };
  const unsigned n = std::max(1u, parallelism);
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Quotes a CSV field when it holds a separator or quote.
std::string csv_field(const std::string& text) {
  if (text.find_first_of(",\"\n;") == std::string::npos) return text;
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c == '\n' ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string aggregate_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "config_hash,algorithm,env,episodes,seed,c_const,delta,mixture,status,regret,"
         "global_switches,local_switches,batches,final_space\n";
  for (const auto& r : rows) {
    const auto& c = r.config;
    out << hex64(config_hash(c)) << ',' << c.algorithm << ',' << csv_field(c.env) << ','
        << c.episodes << ',' << c.seed << ',' << format_real(c.c_const) << ','
        << format_real(c.delta) << ',' << (c.mixture ? 1 : 0) << ','
        << (r.ok ? std::string("ok") : csv_field("error: " + r.error)) << ',';
    if (r.ok) {
      out << format_real(r.regret) << ',' << r.counters.global << ',' << r.counters.local << ','
          << r.counters.batches << ',' << r.final_space;
    } else {
      out << ",,,,";
    }
    out << '\n';
  }
  return out.str();
}

std::string timing_csv(const std::vector<SweepRow>& rows) {
  std::string out = "config_hash,seconds\n";
  for (const auto& r : rows) out += hex64(config_hash(r.config)) + ',' + format_real(r.seconds) + '\n';
  return out;
}

std::vector<RunConfig> expand_sweep(const json& doc) {
  std::vector<RunConfig> configs;
  if (doc.is_array()) {
    for (const auto& item : doc) configs.push_back(RunConfig::from_json(item));
    return configs;
  }
  if (!doc.is_object()) throw std::invalid_argument("sweep file must be an object or an array");
  const json base = doc.value("base", json::object());
  const json grid = doc.value("grid", json::object());
  std::vector<std::pair<std::string, json>> axes;
  for (const auto& [key, values] : grid.items()) {
    if (!values.is_array() || values.empty()) {
      throw std::invalid_argument("grid field '" + key + "' must be a non-empty array");
    }
    axes.emplace_back(key, values);
  }
  std::vector<std::size_t> pos(axes.size(), 0);
  while (true) {
    json item = base;
    for (std::size_t i = 0; i < axes.size(); ++i) item[axes[i].first] = axes[i].second[pos[i]];
    configs.push_back(RunConfig::from_json(item));
    std::size_t i = axes.size();
    while (i > 0) {
      --i;
      if (++pos[i] < axes[i].second.size()) break;
      pos[i] = 0;
      if (i == 0) return configs;
    }
    if (axes.empty()) return configs;
  }
}

}  // namespace lowswitch
