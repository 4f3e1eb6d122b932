#include "lowswitch/envs.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "lowswitch/io.hpp"
#include "lowswitch/rng.hpp"

namespace lowswitch {

TabularMDP chain_env(std::size_t states, std::size_t horizon) {
  if (states < 1 || horizon < 1) throw std::invalid_argument("chain needs S >= 1 and H >= 1");
  const std::size_t S = states;
  const std::size_t A = 2;
  std::vector<double> transition(horizon * S * A * S, 0.0);
  RewardFunction reward(horizon, S, A);
  for (std::size_t h = 0; h < horizon; ++h) {
    for (std::size_t s = 0; s < S; ++s) {
      const std::size_t right = s + 1 < S ? s + 1 : s;
      transition[((h * S + s) * A + 0) * S + right] = 1.0;
      transition[((h * S + s) * A + 1) * S + s] = 1.0;
      if (s + 1 == S) {
        reward.set(h, s, 0, 1.0);
        reward.set(h, s, 1, 1.0);
      }
    }
  }
  return TabularMDP(S, A, horizon, std::move(transition), std::move(reward), 0);
}

TabularMDP random_env(std::size_t states, std::size_t actions, std::size_t horizon,
                      std::uint64_t seed) {
  if (states < 1 || actions < 1 || horizon < 1) {
    throw std::invalid_argument("random env needs S, A, H >= 1");
  }
  CounterRng rng = CounterRng::from_seed(seed);
  const std::size_t S = states;
  std::vector<double> transition(horizon * S * actions * S, 0.0);
  std::vector<double> rewards(horizon * S * actions, 0.0);
  for (std::size_t row = 0; row < horizon * S * actions; ++row) {
    double total = 0.0;
    for (std::size_t n = 0; n < S; ++n) {
      // Exp(1) draws normalized give a Dirichlet(1, ..., 1) row.
      const double w = -std::log1p(-rng.uniform());
      transition[row * S + n] = w;
      total += w;
    }
    for (std::size_t n = 0; n < S; ++n) transition[row * S + n] /= total;
  }
  for (auto& r : rewards) r = rng.uniform();
  return TabularMDP(S, actions, horizon, std::move(transition),
                    RewardFunction(horizon, S, actions, std::move(rewards)), 0);
}

namespace {

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = text.find(sep, start);
    parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

std::uint64_t parse_uint(std::string_view text, std::string_view what) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw std::invalid_argument("cannot parse " + std::string(what) + " from '" +
                                std::string(text) + "'");
  }
  return value;
}

double parse_real(std::string_view text) {
  const std::string copy(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(copy, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != copy.size() || copy.empty()) {
    throw std::invalid_argument("cannot parse a reward from '" + copy + "'");
  }
  return value;
}

std::vector<std::uint64_t> parse_list(std::string_view text, std::size_t min_count,
                                      std::size_t max_count, std::string_view what) {
  std::vector<std::uint64_t> values;
  for (auto part : split(text, ',')) values.push_back(parse_uint(part, what));
  if (values.size() < min_count || values.size() > max_count) {
    throw std::invalid_argument("wrong number of parameters for " + std::string(what));
  }
  return values;
}

}  // namespace

HardInstanceSpec parse_hard_spec(const std::string& body) {
  const auto sections = split(body, ';');
  const auto head = parse_list(sections.front(), 3, 4, "hard instance");
  if (head.size() == 4) {
    if (sections.size() > 1) {
      throw std::invalid_argument("hard instance takes a problem index or arm rewards, not both");
    }
    return problem_k(head[0], head[1], head[2], head[3]);
  }
  HardInstanceSpec spec{head[0], head[1], head[2], {}};
  for (std::size_t i = 1; i < sections.size(); ++i) {
    const auto eq = sections[i].find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("arm reward must look like h,s,a=v");
    }
    const auto idx = parse_list(sections[i].substr(0, eq), 3, 3, "arm");
    spec.arm_rewards[ArmId{idx[0], idx[1], idx[2]}] = parse_real(sections[i].substr(eq + 1));
  }
  spec.validate();
  return spec;
}

LoadedEnv load_env(const std::string& source) {
  const std::string_view view(source);
  if (view.starts_with("chain:")) {
    const auto p = parse_list(view.substr(6), 2, 2, "chain");
    return {chain_env(p[0], p[1]), std::nullopt};
  }
  if (view.starts_with("random:")) {
    const auto p = parse_list(view.substr(7), 4, 4, "random");
    return {random_env(p[0], p[1], p[2], p[3]), std::nullopt};
  }
  if (view.starts_with("hard:")) {
    HardInstanceSpec spec = parse_hard_spec(source.substr(5));
    TabularMDP mdp = build_hard_mdp(spec);
    return {std::move(mdp), std::move(spec)};
  }
  return {read_mdp_file(source), std::nullopt};
}

}  // namespace lowswitch
