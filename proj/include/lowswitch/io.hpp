#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lowswitch/algorithms.hpp"
#include "lowswitch/hard_instances.hpp"
#include "lowswitch/mdp.hpp"
#include "lowswitch/tuple_set.hpp"

namespace lowswitch {

/// 17 significant digits, enough for an exact round trip.
std::string format_real(double value);

/// {states, actions, horizon, initial_state, transition[h][s][a][s'],
///  reward[h][s][a]} plus `absorbing` when the MDP has one.
nlohmann::json mdp_to_json(const TabularMDP& mdp);
/// Validates through the TabularMDP constructor. Malformed documents throw
/// std::invalid_argument.
TabularMDP mdp_from_json(const nlohmann::json& doc);

TabularMDP read_mdp_file(const std::string& path);
void write_mdp_file(const std::string& path, const TabularMDP& mdp);

/// Arm id -> reward for every arm of the instance.
nlohmann::json arms_manifest(const HardInstanceSpec& spec);

nlohmann::json tuples_to_json(const TupleSet& set);

/// F, P^int and P-hat of every stage.
nlohmann::json kernel_dump(const std::vector<KernelSnapshot>& kernels);

/// Writes text to a file, throwing std::runtime_error naming the path on
/// failure.
void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace lowswitch
