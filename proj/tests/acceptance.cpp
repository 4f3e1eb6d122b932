// Acceptance suite: one PASS/FAIL line per criterion. Exit status is 0 only
// when every selected criterion passes. Pass criterion numbers as arguments
// to run a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "lowswitch/algorithms.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/envs.hpp"
#include "lowswitch/estimation.hpp"
#include "lowswitch/harness.hpp"
#include "lowswitch/policy_space.hpp"
#include "lowswitch/schedule.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace lowswitch;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

constexpr std::uint64_t kEnvSeed = 7;

TabularMDP shared_env() { return random_env(2, 2, 3, kEnvSeed); }

std::uint64_t shape_aware_k0(std::uint64_t k, const TabularMDP& env) {
  return stage_schedule(k, env.horizon() * env.num_states() * env.num_actions()).stage_count();
}

// Least-squares slope of y against x.
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Outcome criterion1() {
  const auto env = shared_env();
  const std::uint64_t k = 4096;
  const std::uint64_t k0 = shape_aware_k0(k, env);
  const std::uint64_t bound = 2 * 3 * 2 * 2 * k0;
  std::uint64_t worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    worst = std::max(worst, run_apeve(env, k, {}, seed).counters().global);
  }
  return {worst <= bound,
          fmt("max global switches %llu over seeds 0-9, bound 2HSA*K0 = %llu with K0 = %llu "
              "(K0 = 3 would give 72; max %s 72)",
              (unsigned long long)worst, (unsigned long long)bound, (unsigned long long)k0,
              worst <= 72 ? "<=" : ">")};
}

Outcome criterion2() {
  const auto env = shared_env();
  std::uint64_t worst = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    worst = std::max(worst, run_larfe_experiment(env, 2048, {}, seed).counters().global);
  }
  return {worst <= 24, fmt("max global switches %llu over seeds 0-9, bound 24",
                           (unsigned long long)worst)};
}

Outcome criterion3() {
  const auto env = shared_env();
  const std::uint64_t H = env.horizon();
  bool ok = true;
  std::string detail;
  for (std::uint64_t k : {1024u, 4096u, 16384u}) {
    const std::uint64_t k0 = shape_aware_k0(k, env);
    const std::uint64_t k0_plus =
        stage_schedule_plus(k, H * env.num_states() * env.num_actions()).stage_count();
    std::uint64_t worst = 0, worst_plus = 0, declared = 0, declared_plus = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      EliminationConfig cfg;
      cfg.c_const = 0.05;
      const auto a = run_apeve(env, k, cfg, seed);
      const auto b = run_apeve_plus(env, k, cfg, seed);
      worst = std::max(worst, a.counters().batches);
      worst_plus = std::max(worst_plus, b.counters().batches);
      declared = std::max(declared, a.trace.batches_declared());
      declared_plus = std::max(declared_plus, b.trace.batches_declared());
    }
    const std::uint64_t bound = (H + 1) * k0;
    const std::uint64_t bound_plus = 2 * (H + 1) + (k0_plus - 2);
    ok = ok && worst <= bound && declared <= bound && worst_plus <= bound_plus &&
         declared_plus <= bound_plus;
    detail += fmt("K=%llu apeve %llu/%llu (declared %llu) apeve+ %llu/%llu (declared %llu); ",
                  (unsigned long long)k, (unsigned long long)worst, (unsigned long long)bound,
                  (unsigned long long)declared, (unsigned long long)worst_plus,
                  (unsigned long long)bound_plus, (unsigned long long)declared_plus);
  }
  return {ok, detail};
}

Outcome criterion4() {
  bool ok = stage_schedule(16).lengths == std::vector<std::uint64_t>{4, 4} &&
            stage_schedule(256).lengths == std::vector<std::uint64_t>{16, 64, 48};
  std::string detail = ok ? "worked values match; " : "worked values differ; ";
  for (std::uint64_t k : {16ull, 64ull, 256ull, 1024ull, 4096ull, 1ull << 20}) {
    const auto s = stage_schedule(k);
    std::uint64_t total = 0;
    for (auto t : s.lengths) total += t;
    const double cap = std::log2(std::log2(static_cast<double>(k))) + 1.0;
    const bool good = 2 * total == k && static_cast<double>(s.stage_count()) <= cap;
    ok = ok && good;
    detail += fmt("K=%llu K0=%zu%s ", k, s.stage_count(), good ? "" : " (bad)");
  }
  return {ok, detail};
}

Outcome criterion5() {
  CounterRng rng = CounterRng::from_seed(5);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t S = 1 + rng.below(3), A = 1 + rng.below(2), H = 1 + rng.below(3);
    const auto env = random_env(S, A, H, 5000 + i);
    const auto space = VersionSpace::full({H, S, A});
    const double dp = optimal_value_and_policy(env.reward_function(), env).value;
    const double full = best_in_set(space, env.reward_function(), env).value;
    const double scan = best_in_set_by_scan(space, env.reward_function(), env).value;
    worst = std::max({worst, std::abs(full - dp), std::abs(scan - dp)});
  }
  return {worst <= 1e-10, fmt("max |best_in_set - DP| = %.3g over 100 MDPs", worst)};
}

Outcome criterion6() {
  CounterRng rng = CounterRng::from_seed(6);
  const double slack = 1e-12;
  int mono_violations = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t S = 1 + rng.below(3), A = 1 + rng.below(2), H = 1 + rng.below(3);
    const auto env = random_env(S, A, H, 6000 + i);
    TupleSet small(H, S, A), large(H, S, A);
    for (std::size_t h = 0; h < H; ++h)
      for (std::size_t s = 0; s < S; ++s)
        for (std::size_t a = 0; a < A; ++a)
          for (std::size_t n = 0; n < S; ++n) {
            const double u = rng.uniform();
            if (u < 0.2) small.insert({h, s, a, n});
            if (u < 0.5) large.insert({h, s, a, n});
          }
    const auto p_small = build_absorbing(env, small);
    const auto p_large = build_absorbing(env, large);
    const auto r = oracle::random_reward(H, S, A, rng);
    for (const auto& pi : oracle::all_policies(H, S, A)) {
      const double v = value_of_policy(pi, r, env);
      const double v_small = value_of_policy(pi, r, p_small);
      const double v_large = value_of_policy(pi, r, p_large);
      if (v_small > v + slack || v_large > v_small + slack) ++mono_violations;
    }
  }
  int sandwich_violations = 0;
  for (int i = 0; i < 50; ++i) {
    const std::size_t S = 1 + rng.below(3), A = 1 + rng.below(2), H = 2 + rng.below(3);
    const double theta = 1.0 / static_cast<double>(H);
    const auto p1 = fixture::random_absorbing(S, A, H, 0.5, rng);
    const auto p2 = fixture::perturb(p1, theta, rng);
    if (!check_multiplicative_accuracy(p1, p2, theta)) ++sandwich_violations;
    for (const auto& pi : oracle::all_policies(H, S, A))
      for (std::size_t h = 0; h < H; ++h)
        for (std::size_t s = 0; s < S; ++s)
          for (std::size_t a = 0; a < A; ++a) {
            const double v1 = visitation_prob(pi, h, s, a, p1);
            const double v2 = visitation_prob(pi, h, s, a, p2);
            if (v2 < 0.25 * v1 - slack || v2 > 3.0 * v1 + slack) ++sandwich_violations;
          }
  }
  return {mono_violations == 0 && sandwich_violations == 0,
          fmt("absorbing monotonicity violations %d/50 instances, visitation sandwich "
              "violations %d/50 instances",
              mono_violations, sandwich_violations)};
}

Outcome criterion7() {
  const auto env = random_env(2, 2, 2, kEnvSeed);
  const std::uint64_t k = 200000;
  const auto split = larfe_split(k);
  int seeds_ok = 0;
  double worst = 0.0;
  std::string per_seed;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto res = run_larfe(env, split.crude, split.fine, {}, seed);
    CounterRng rr = CounterRng::from_seed(999).child(seed);
    int good = 0;
    for (int q = 0; q < 20; ++q) {
      const auto r = oracle::random_reward(2, 2, 2, rr);
      const double best = optimal_value_and_policy(r, env).value;
      const double gap = best - value_of_policy(res.plan(r).policy, r, env);
      worst = std::max(worst, gap);
      if (gap <= 0.05) ++good;
    }
    if (good >= 18) ++seeds_ok;
    per_seed += std::to_string(good) + (seed < 9 ? "," : "");
  }
  return {seeds_ok >= 9,
          fmt("%d/10 seeds with >= 18/20 gaps <= 0.05 (per seed: %s; worst gap %.4f; "
              "N0=%llu N=%llu)",
              seeds_ok, per_seed.c_str(), worst, (unsigned long long)split.crude,
              (unsigned long long)split.fine)};
}

Outcome criterion8() {
  const auto loaded = load_env("hard:2,2,2;1,0,0=1.0;1,0,1=0.5");
  const auto& env = loaded.mdp;
  const auto opt = optimal_value_and_policy(env.reward_function(), env);
  const std::uint64_t opt_index = encode(opt.policy);
  const PolicyShape shape{2, 2, 2};
  int present = 0, tight = 0;
  double last_radius = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    EliminationConfig cfg;
    cfg.c_const = 0.05;
    cfg.delta = 0.1;
    const auto rep = run_apeve(env, 16384, cfg, seed);
    if (rep.final_space.contains(opt_index)) ++present;
    last_radius = rep.stages.back().radius;
    double worst_gap = 0.0;
    rep.final_space.for_each([&](std::uint64_t i) {
      const double v = value_of_policy(decode(i, shape), env.reward_function(), env);
      worst_gap = std::max(worst_gap, opt.value - v);
    });
    if (worst_gap <= 4.0 * last_radius) ++tight;
  }
  return {present >= 90 && tight >= 90,
          fmt("optimal policy kept in %d/100 seeds; surviving gaps <= 4*eps (eps = %.4g) in "
              "%d/100 seeds",
              present, last_radius, tight)};
}

Outcome criterion9() {
  const auto env = shared_env();
  std::vector<double> log_k, log_apeve, log_ef;
  std::string detail;
  for (int e = 10; e <= 16; ++e) {
    const std::uint64_t k = std::uint64_t{1} << e;
    double apeve = 0.0, ef = 0.0;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      EliminationConfig cfg;
      cfg.c_const = 0.05;
      apeve += run_apeve(env, k, cfg, seed).total_regret() / 10.0;
      ef += explore_first(env, k, {}, seed).total_regret() / 10.0;
    }
    log_k.push_back(std::log(static_cast<double>(k)));
    log_apeve.push_back(std::log(apeve));
    log_ef.push_back(std::log(ef));
  }
  const double s_apeve = slope(log_k, log_apeve);
  const double s_ef = slope(log_k, log_ef);
  const bool ok_apeve = s_apeve <= 0.85;
  const bool ok_ef = s_ef >= 0.55 && s_ef <= 0.80;
  return {ok_apeve && ok_ef,
          fmt("APEVE slope %.3f (need <= 0.85: %s); Explore-First slope %.3f (need in "
              "[0.55, 0.80]: %s)",
              s_apeve, ok_apeve ? "ok" : "no", s_ef, ok_ef ? "ok" : "no")};
}

Outcome criterion10() {
  std::vector<RunConfig> configs;
  for (const char* algo : {"apeve", "apeve-plus", "larfe", "explore-first"}) {
    RunConfig c;
    c.algorithm = algo;
    c.env = "random:2,2,3,7";
    c.episodes = 4096;
    c.seed = 11;
    configs.push_back(c);
  }
  RunConfig mixed = configs[0];
  mixed.mixture = true;
  configs.push_back(mixed);
  RunConfig hard = configs[0];
  hard.env = "hard:2,2,2;1,0,0=1.0;1,0,1=0.5";
  hard.c_const = 0.05;
  configs.push_back(hard);
  int identical = 0;
  for (const auto& c : configs) {
    const auto env = load_env(c.env).mdp;
    if (trace_csv(execute(c, env)) == trace_csv(execute(c, env))) ++identical;
  }
  return {identical == static_cast<int>(configs.size()),
          fmt("%d/%zu configurations produced byte-identical trace.csv on repeat", identical,
              configs.size())};
}

struct Criterion {
  int id;
  double limit_seconds;  // 0 means no limit
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, 30, criterion1},   {2, 10, criterion2},  {3, 0, criterion3},  {4, 1, criterion4},
      {5, 60, criterion5},   {6, 60, criterion6},  {7, 300, criterion7}, {8, 600, criterion8},
      {9, 1800, criterion9}, {10, 0, criterion10}};
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const auto& c : all) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = c.run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = c.limit_seconds == 0 || secs < c.limit_seconds;
    const bool pass = out.pass && in_time;
    if (!pass) ++failures;
    std::string timing = fmt("%.2fs", secs);
    if (c.limit_seconds > 0) timing += fmt(" of %.0fs", c.limit_seconds);
    std::printf("criterion %d: %s %s (%s)\n", c.id, pass ? "PASS" : "FAIL", out.detail.c_str(),
                timing.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
