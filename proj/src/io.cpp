#include "lowswitch/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lowswitch {

using nlohmann::json;

std::string format_real(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

json mdp_to_json(const TabularMDP& mdp) {
  const std::size_t S = mdp.num_states();
  const std::size_t A = mdp.num_actions();
  const std::size_t H = mdp.horizon();
  json transition = json::array();
  json reward = json::array();
  for (std::size_t h = 0; h < H; ++h) {
    json tl = json::array();
    json rl = json::array();
    for (std::size_t s = 0; s < S; ++s) {
      json ts = json::array();
      json rs = json::array();
      for (std::size_t a = 0; a < A; ++a) {
        const auto row = mdp.row(h, s, a);
        ts.push_back(json(std::vector<double>(row.begin(), row.end())));
        rs.push_back(mdp.reward(h, s, a));
      }
      tl.push_back(std::move(ts));
      rl.push_back(std::move(rs));
    }
    transition.push_back(std::move(tl));
    reward.push_back(std::move(rl));
  }
  json doc = {{"states", S},
              {"actions", A},
              {"horizon", H},
              {"initial_state", mdp.initial_state()},
              {"transition", std::move(transition)},
              {"reward", std::move(reward)}};
  if (mdp.absorbing()) doc["absorbing"] = *mdp.absorbing();
  return doc;
}

namespace {

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) {
    throw std::invalid_argument(std::string("MDP document lacks field '") + name + "'");
  }
  return doc.at(name);
}

std::size_t count_field(const json& doc, const char* name) {
  const json& v = field(doc, name);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw std::invalid_argument(std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

const json& sized_array(const json& v, std::size_t n, const char* what) {
  if (!v.is_array() || v.size() != n) {
    throw std::invalid_argument(std::string(what) + " has the wrong shape");
  }
  return v;
}

}  // namespace

TabularMDP mdp_from_json(const json& doc) {
  const std::size_t S = count_field(doc, "states");
  const std::size_t A = count_field(doc, "actions");
  const std::size_t H = count_field(doc, "horizon");
  const std::size_t init = count_field(doc, "initial_state");
  std::optional<std::size_t> absorbing;
  if (doc.contains("absorbing") && !doc.at("absorbing").is_null()) {
    absorbing = count_field(doc, "absorbing");
  }
  const json& tr = sized_array(field(doc, "transition"), H, "transition");
  const json& rw = sized_array(field(doc, "reward"), H, "reward");
  std::vector<double> transition;
  std::vector<double> reward;
  transition.reserve(H * S * A * S);
  reward.reserve(H * S * A);
  try {
    for (std::size_t h = 0; h < H; ++h) {
      const json& tl = sized_array(tr[h], S, "transition");
      const json& rl = sized_array(rw[h], S, "reward");
      for (std::size_t s = 0; s < S; ++s) {
        const json& ts = sized_array(tl[s], A, "transition");
        const json& rs = sized_array(rl[s], A, "reward");
        for (std::size_t a = 0; a < A; ++a) {
          const json& row = sized_array(ts[a], S, "transition");
          for (const auto& p : row) transition.push_back(p.get<double>());
          reward.push_back(rs[a].get<double>());
        }
      }
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("non-numeric MDP entry: ") + e.what());
  }
  return TabularMDP(S, A, H, std::move(transition), RewardFunction(H, S, A, std::move(reward)),
                    init, absorbing);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

TabularMDP read_mdp_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
  return mdp_from_json(doc);
}

void write_mdp_file(const std::string& path, const TabularMDP& mdp) {
  write_text_file(path, mdp_to_json(mdp).dump(2) + "\n");
}

json arms_manifest(const HardInstanceSpec& spec) {
  json arms = json::array();
  for (const ArmId& arm : all_arms(spec)) {
    const auto it = spec.arm_rewards.find(arm);
    arms.push_back({{"h", arm.h},
                    {"s", arm.s},
                    {"a", arm.a},
                    {"reward", it == spec.arm_rewards.end() ? 0.0 : it->second}});
  }
  return {{"states", spec.states},
          {"actions", spec.actions},
          {"horizon", spec.horizon},
          {"tree_depth", minimal_tree_depth(spec.states, spec.actions)},
          {"arms", std::move(arms)}};
}

json tuples_to_json(const TupleSet& set) {
  json out = json::array();
  for (const auto& t : set.tuples()) out.push_back({t.h, t.s, t.a, t.next});
  return out;
}

json kernel_dump(const std::vector<KernelSnapshot>& kernels) {
  json out = json::array();
  for (const auto& k : kernels) {
    out.push_back({{"stage", k.stage},
                   {"infrequent", tuples_to_json(k.infrequent)},
                   {"intermediate", mdp_to_json(k.intermediate)},
                   {"estimate", mdp_to_json(k.estimate)}});
  }
  return out;
}

}  // namespace lowswitch
