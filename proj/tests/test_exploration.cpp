#include <cmath>
#include <map>

#include "doctest.h"
#include "fixtures.hpp"
#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"
#include "lowswitch/exploration.hpp"
#include "lowswitch/switching.hpp"
#include "oracles.hpp"

using namespace lowswitch;

namespace {

PolicyShape shape_of(const TabularMDP& m) {
  return {m.horizon(), m.num_states(), m.num_actions()};
}

// Global switches inside one exploration trace.
std::uint64_t switches(const EpisodeTrace& trace, const PolicyShape& shape) {
  return count_switches(trace, shape).global;
}

}  // namespace

TEST_SUITE("exploration") {
  TEST_CASE("budget split") {
    const auto b = ExplorationBudget::make(100, 12);
    CHECK(b.per_policy == 8);
    CHECK(b.leftover == 4);
    CHECK(ExplorationBudget::make(12, 12).leftover == 0);
    CHECK_THROWS_AS(ExplorationBudget::make(11, 12), BudgetError);
  }

  TEST_CASE("crude exploration consumes exactly T episodes with at most HSA switches") {
    for (std::uint64_t t : {12u, 100u, 601u}) {
      const auto env = random_env(2, 2, 3, 5);
      const auto shape = shape_of(env);
      const auto res = crude_exploration(VersionSpace::full(shape), t, env, 3.0,
                                         CounterRng::from_seed(1));
      CHECK(res.trace.size() == t);
      CHECK(switches(res.trace, shape) <= 12);
      CHECK(res.trace.batches_declared() == 3);
      for (std::size_t k = 0; k < res.trace.size(); ++k)
        CHECK(res.trace.entries()[k].episode == k);
    }
  }

  TEST_CASE("fine exploration consumes exactly T episodes with at most HSA switches") {
    const auto env = random_env(2, 2, 3, 5);
    const auto shape = shape_of(env);
    const auto space = VersionSpace::full(shape);
    const auto crude = crude_exploration(space, 120, env, 3.0, CounterRng::from_seed(1));
    const auto fine = fine_exploration(crude.infrequent, crude.intermediate, 125, space, env,
                                       CounterRng::from_seed(2));
    CHECK(fine.trace.size() == 125);
    CHECK(switches(fine.trace, shape) <= 12);
    CHECK(fine.trace.batches_declared() == 1);
    // The leftover episodes go to the last planned policy.
    const auto& last = fine.trace.entries().back();
    CHECK(last.policy == PolicyRef::deterministic(fine.planned.back()));
  }

  TEST_CASE("budget below one episode per plan throws") {
    const auto env = random_env(2, 2, 3, 5);
    const auto space = VersionSpace::full(shape_of(env));
    CHECK_THROWS_AS(crude_exploration(space, 11, env, 3.0, CounterRng::from_seed(1)), BudgetError);
    const auto crude = crude_exploration(space, 12, env, 3.0, CounterRng::from_seed(1));
    CHECK_THROWS_AS(fine_exploration(crude.infrequent, crude.intermediate, 11, space, env,
                                     CounterRng::from_seed(2)),
                    BudgetError);
  }

  TEST_CASE("empty space and absorbing env are rejected") {
    const auto env = random_env(2, 2, 2, 5);
    CHECK_THROWS_AS(crude_exploration(VersionSpace::empty(shape_of(env)), 100, env, 3.0,
                                      CounterRng::from_seed(1)),
                    PreconditionError);
    const auto abs = build_absorbing(env, TupleSet(2, 2, 2));
    CHECK_THROWS_AS(crude_exploration(VersionSpace::full(shape_of(env)), 100, abs, 3.0,
                                      CounterRng::from_seed(1)),
                    std::invalid_argument);
  }

  TEST_CASE("mixture mode switches at most H times in crude and once in fine") {
    const auto env = random_env(2, 2, 3, 9);
    const auto shape = shape_of(env);
    const auto space = VersionSpace::full(shape);
    ExplorationOptions opt;
    opt.mixture = true;
    const auto crude = crude_exploration(space, 240, env, 3.0, CounterRng::from_seed(3), opt);
    CHECK(crude.trace.size() == 240);
    CHECK(switches(crude.trace, shape) <= 3);
    CHECK(crude.trace.mixtures().size() == 3);
    const auto fine = fine_exploration(crude.infrequent, crude.intermediate, 240, space, env,
                                       CounterRng::from_seed(4), opt);
    CHECK(fine.trace.size() == 240);
    CHECK(switches(fine.trace, shape) == 0);
    CHECK(fine.trace.mixtures().size() == 1);
  }

  TEST_CASE("a deterministic environment is learned exactly") {
    // Chain on 3 states: the visited transitions are deterministic, so every
    // pair with data gets a one-hot row and nothing it visits is infrequent.
    const auto env = chain_env(3, 3);
    const auto shape = shape_of(env);
    const auto space = VersionSpace::full(shape);
    const double iota = 0.01;  // threshold 6 * 9 * 0.01 = 0.54 < 1
    const auto crude = crude_exploration(space, 1800, env, iota, CounterRng::from_seed(5));
    const auto fine = fine_exploration(crude.infrequent, crude.intermediate, 1800, space, env,
                                       CounterRng::from_seed(6));
    for (std::size_t h = 0; h < 3; ++h)
      for (std::size_t s = 0; s < 3; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
          const bool reachable = crude.layer_counts[h].count(s, a) > 0;
          for (std::size_t n = 0; n < 3; ++n) {
            const bool on_path = env.transition(h, s, a, n) == 1.0;
            if (reachable && on_path) CHECK_FALSE(crude.infrequent.contains(h, s, a, n));
            if (reachable) CHECK(fine.estimate.transition(h, s, a, n) == env.transition(h, s, a, n));
          }
        }
  }

  TEST_CASE("crude counts of layer h come only from the layer-h block") {
    const auto env = random_env(2, 2, 3, 13);
    const auto shape = shape_of(env);
    const auto res = crude_exploration(VersionSpace::full(shape), 240, env, 3.0,
                                       CounterRng::from_seed(8));
    for (std::size_t h = 0; h < 3; ++h) {
      std::uint64_t total = 0;
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a = 0; a < 2; ++a) total += res.layer_counts[h].count(s, a);
      CHECK(total == 80);
    }
  }

  TEST_CASE("planned policies maximize visitation on the frozen kernel") {
    const auto env = random_env(2, 2, 2, 21);
    const auto shape = shape_of(env);
    const auto space = VersionSpace::full(shape);
    const auto crude = crude_exploration(space, 400, env, 1.0, CounterRng::from_seed(10));
    const auto fine = fine_exploration(crude.infrequent, crude.intermediate, 400, space, env,
                                       CounterRng::from_seed(11));
    const auto policies = oracle::all_policies(2, 2, 2);
    for (std::size_t h = 0; h < 2; ++h)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
          double best = 0.0;
          for (const auto& pi : policies)
            best = std::max(best, oracle::visitation(pi, h, s, a, crude.intermediate));
          const auto chosen = decode(fine.planned[(h * 2 + s) * 2 + a], shape);
          CHECK(std::abs(oracle::visitation(chosen, h, s, a, crude.intermediate) - best) <= 1e-12);
        }
  }

  TEST_CASE("same stream gives the same result") {
    const auto env = random_env(3, 2, 2, 4);
    const auto space = VersionSpace::full(shape_of(env));
    const auto a = crude_exploration(space, 300, env, 2.0, CounterRng::from_seed(77));
    const auto b = crude_exploration(space, 300, env, 2.0, CounterRng::from_seed(77));
    CHECK(a.infrequent == b.infrequent);
    CHECK(a.intermediate == b.intermediate);
    CHECK(a.planned == b.planned);
    CHECK(a.layer_counts == b.layer_counts);
  }

  TEST_CASE("mixture episodes spread evenly over the planned slots") {
    const auto env = random_env(2, 2, 2, 30);
    const auto shape = shape_of(env);
    const auto space = VersionSpace::full(shape);
    const auto crude = crude_exploration(space, 80, env, 1.0, CounterRng::from_seed(12));
    ExplorationOptions opt;
    opt.mixture = true;
    const std::uint64_t n = 80000;
    const auto fine = fine_exploration(crude.infrequent, crude.intermediate, n, space, env,
                                       CounterRng::from_seed(13), opt);
    // Executed policy indices are not in the trace, so recount from the
    // multiplicity of each index in the plan and the pooled pair counts.
    std::map<std::uint64_t, double> share;
    for (auto idx : fine.planned) share[idx] += 1.0 / static_cast<double>(fine.planned.size());
    for (std::size_t h = 0; h < 2; ++h)
      for (std::size_t s = 0; s < 2; ++s)
        for (std::size_t a = 0; a < 2; ++a) {
          double expected = 0.0;
          for (const auto& [idx, w] : share)
            expected += w * visitation_prob(decode(idx, shape), h, s, a, env);
          const double got =
              static_cast<double>(fine.layer_counts[h].count(s, a)) / static_cast<double>(n);
          const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(n));
          CHECK(std::abs(got - expected) <= 4.5 * se + 1e-12);
        }
  }
}
