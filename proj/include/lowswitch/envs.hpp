#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "lowswitch/hard_instances.hpp"
#include "lowswitch/mdp.hpp"

namespace lowswitch {

/// Deterministic chain with two actions: action 0 moves one state right
/// (stopping at S-1), action 1 stays. Reward 1 for any action taken at S-1.
TabularMDP chain_env(std::size_t states, std::size_t horizon);

/// Rows drawn from Dirichlet(1), rewards uniform on [0,1), initial state 0.
/// Fully determined by the seed.
TabularMDP random_env(std::size_t states, std::size_t actions, std::size_t horizon,
                      std::uint64_t seed);

/// A resolved environment source.
struct LoadedEnv {
  TabularMDP mdp;
  /// Set for hard instances.
  std::optional<HardInstanceSpec> hard;
};

/// Parses an env source:
///   chain:S,H
///   random:S,A,H,SEED
///   hard:S,A,H            all arms pay 0
///   hard:S,A,H,K          problem K (arm K pays 1)
///   hard:S,A,H;h,s,a=v;.. explicit arm rewards
/// Anything else is read as an MDP JSON file. Throws std::invalid_argument on
/// a malformed source.
LoadedEnv load_env(const std::string& source);

/// Parses a hard-instance source (the part after "hard:").
HardInstanceSpec parse_hard_spec(const std::string& body);

}  // namespace lowswitch
