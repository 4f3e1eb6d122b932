#include <filesystem>
#include <stdexcept>

#include "doctest.h"
#include "lowswitch/envs.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/harness.hpp"
#include "lowswitch/io.hpp"
#include "lowswitch/switching.hpp"

using namespace lowswitch;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("lowswitch_test_" + name);
  fs::remove_all(dir);
  return dir;
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("count_switches examples") {
    const PolicyShape shape{1, 1, 2};
    const DeterministicPolicy p0(shape, {0});
    const DeterministicPolicy p1(shape, {1});
    std::vector<DeterministicPolicy> seq{p0, p0, p1};
    auto c = count_switches(seq);
    CHECK(c.global == 1);
    CHECK(c.local == 1);
    CHECK(c.batches == 2);

    seq = {p0, p1, p0, p1, p0};
    c = count_switches(seq);
    CHECK(c.global == 4);  // K - 1

    const PolicyShape wide{1, 2, 2};
    const std::vector<DeterministicPolicy> two{DeterministicPolicy(wide, {0, 0}),
                                               DeterministicPolicy(wide, {1, 1})};
    c = count_switches(two);
    CHECK(c.global == 1);
    CHECK(c.local == 2);
    CHECK(count_switches(std::vector<DeterministicPolicy>{}) == SwitchCounters{});
  }

  TEST_CASE("trace batches only count with a policy change") {
    EpisodeTrace t;
    const auto b0 = t.new_batch();
    const auto b1 = t.new_batch();
    t.push({0, 1, Phase::Crude, PolicyRef::deterministic(3), b0, 0.0});
    t.push({1, 1, Phase::Crude, PolicyRef::deterministic(3), b1, 0.0});
    t.push({2, 1, Phase::Crude, PolicyRef::deterministic(1), b1, 0.0});
    const auto c = count_switches(t, {1, 2, 2});
    CHECK(c.global == 1);
    CHECK(c.batches == 1);
    CHECK(c.local == 1);
    CHECK_THROWS_AS(check_counters({5, 1, 1}, 10, {1, 2, 2}), InvariantViolation);
    CHECK_THROWS_AS(check_counters({1, 1, 3}, 10, {1, 2, 2}), InvariantViolation);
  }

  TEST_CASE("config round trip and validation") {
    RunConfig c;
    c.algorithm = "apeve-plus";
    c.env = "chain:3,4";
    c.episodes = 512;
    c.delta = 0.05;
    c.c_const = 0.25;
    c.seed = 17;
    c.mixture = true;
    c.out = "x";
    CHECK(RunConfig::from_json(c.to_json()) == c);
    CHECK_THROWS_AS(RunConfig::from_json({{"bogus", 1}}), std::invalid_argument);
    CHECK_THROWS_AS(RunConfig::from_json({{"episodes", "many"}}), std::invalid_argument);
    RunConfig bad;
    bad.algorithm = "ucb";
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = RunConfig{};
    bad.episodes = 101;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = RunConfig{};
    bad.delta = 1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  }

  TEST_CASE("config hash ignores output fields") {
    RunConfig a;
    RunConfig b = a;
    b.out = "elsewhere";
    b.kernel_dump = true;
    CHECK(config_hash(a) == config_hash(b));
    b.seed = 1;
    CHECK(config_hash(a) != config_hash(b));
  }

  TEST_CASE("run writes identical traces for the same seed") {
    RunConfig c;
    c.episodes = 1024;
    c.seed = 3;
    c.kernel_dump = true;
    const auto d1 = scratch_dir("det1");
    const auto d2 = scratch_dir("det2");
    c.out = d1.string();
    run_experiment(c);
    c.out = d2.string();
    run_experiment(c);
    const auto t1 = read_text_file((d1 / "trace.csv").string());
    CHECK(t1 == read_text_file((d2 / "trace.csv").string()));
    CHECK(t1.rfind("episode,stage,phase,policy_id,expected_value,instant_regret,cum_regret,"
                   "global_switch_cum,return\n",
                   0) == 0);
    CHECK(std::count(t1.begin(), t1.end(), '\n') == 1025);
    const auto summary = nlohmann::json::parse(read_text_file((d1 / "summary.json").string()));
    CHECK(summary.at("episodes") == 1024);
    CHECK(RunConfig::from_json(summary.at("config")).seed == 3);
    CHECK(fs::exists(d1 / "kernel_dump.json"));
    fs::remove_all(d1);
    fs::remove_all(d2);
  }

  TEST_CASE("sweep results do not depend on parallelism") {
    std::vector<RunConfig> configs;
    for (const char* algo : {"apeve", "apeve-plus", "larfe", "explore-first"}) {
      for (std::uint64_t seed = 0; seed < 2; ++seed) {
        RunConfig c;
        c.algorithm = algo;
        c.episodes = 2048;
        c.seed = seed;
        configs.push_back(c);
      }
    }
    RunConfig broken;
    broken.env = "chain:oops";
    configs.push_back(broken);
    const auto serial = sweep(configs, 1);
    const auto parallel = sweep(configs, 4);
    CHECK(aggregate_csv(serial) == aggregate_csv(parallel));
    CHECK_FALSE(serial.back().ok);
    CHECK_FALSE(serial.back().error.empty());

    const auto single = run_experiment(configs[0]);
    CHECK(serial[0].regret == single.report.total_regret());
    CHECK(serial[0].counters == single.report.counters());
  }

  TEST_CASE("sweep grid expansion") {
    const nlohmann::json doc = {{"base", {{"algorithm", "larfe"}, {"episodes", 256}}},
                                {"grid", {{"seed", {1, 2}}, {"episodes", {128, 256, 512}}}}};
    const auto configs = expand_sweep(doc);
    REQUIRE(configs.size() == 6);
    CHECK(configs[0].episodes == 128);
    CHECK(configs[0].seed == 1);
    CHECK(configs[1].seed == 2);
    CHECK(configs[2].episodes == 256);
    for (const auto& c : configs) CHECK(c.algorithm == "larfe");
  }

  TEST_CASE("regret grows with the budget and never decreases within a run") {
    double previous = -1.0;
    for (std::uint64_t k : {1024u, 4096u, 16384u}) {
      RunConfig c;
      c.env = "random:2,2,3,7";
      c.episodes = k;
      const auto out = run_experiment(c);
      const auto& cum = out.report.cum_regret;
      for (std::size_t i = 1; i < cum.size(); ++i) CHECK(cum[i] >= cum[i - 1] - 1e-12);
      CHECK(out.report.total_regret() > previous);
      previous = out.report.total_regret();
    }
  }

  TEST_CASE("env sources") {
    CHECK(load_env("chain:4,5").mdp.num_states() == 4);
    const auto r = load_env("random:2,3,4,9");
    CHECK(r.mdp.num_actions() == 3);
    CHECK(r.mdp == random_env(2, 3, 4, 9));
    const auto h = load_env("hard:2,2,2;1,0,0=1.0;1,0,1=0.5");
    REQUIRE(h.hard.has_value());
    CHECK(h.hard->arm_rewards.size() == 2);
    CHECK(load_env("hard:3,2,4,1").hard->arm_rewards.size() == 1);
    CHECK(load_env("hard:3,2,4").hard->arm_rewards.empty());
    CHECK_THROWS_AS(load_env("chain:4"), std::invalid_argument);
    CHECK_THROWS_AS(load_env("random:2,2,x,1"), std::invalid_argument);
    CHECK_THROWS_AS(load_env("hard:2,2,2;0,0,1=1"), std::invalid_argument);
    CHECK_THROWS(load_env("/nonexistent/mdp.json"));
  }

  TEST_CASE("MDP JSON round trip") {
    const auto m = random_env(3, 2, 2, 5);
    CHECK(mdp_from_json(mdp_to_json(m)) == m);
    auto doc = mdp_to_json(m);
    doc["transition"][0][0][0][0] = 2.0;
    CHECK_THROWS(mdp_from_json(doc));
    doc = mdp_to_json(m);
    doc.erase("horizon");
    CHECK_THROWS_AS(mdp_from_json(doc), std::invalid_argument);
  }
}
