#include "lowswitch/policy.hpp"

#include <cmath>
#include <stdexcept>

namespace lowswitch {

DeterministicPolicy::DeterministicPolicy(PolicyShape shape)
    : shape_(shape), table_(shape.horizon * shape.states, 0) {}

DeterministicPolicy::DeterministicPolicy(PolicyShape shape, std::vector<std::uint32_t> table)
    : shape_(shape), table_(std::move(table)) {
  if (table_.size() != shape_.horizon * shape_.states) {
    throw std::invalid_argument("policy table has " + std::to_string(table_.size()) +
                                " entries, expected H*S = " +
                                std::to_string(shape_.horizon * shape_.states));
  }
  for (auto a : table_) {
    if (a >= shape_.actions) {
      throw std::invalid_argument("policy action " + std::to_string(a) + " out of range");
    }
  }
}

void DeterministicPolicy::set_action(std::size_t h, std::size_t s, std::size_t a) {
  if (h >= shape_.horizon || s >= shape_.states || a >= shape_.actions) {
    throw std::invalid_argument("policy entry out of range");
  }
  table_[h * shape_.states + s] = static_cast<std::uint32_t>(a);
}

std::size_t DeterministicPolicy::differing_entries(const DeterministicPolicy& other) const {
  if (!(shape_ == other.shape_)) {
    throw std::invalid_argument("cannot compare policies of different shapes");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < table_.size(); ++i) n += table_[i] != other.table_[i];
  return n;
}

StochasticPolicy::StochasticPolicy(std::vector<Member> members) : members_(std::move(members)) {
  if (members_.empty()) throw std::invalid_argument("stochastic policy needs a member");
  double total = 0.0;
  for (const auto& [w, pi] : members_) {
    if (!(w >= 0.0)) throw std::invalid_argument("mixture weight must be non-negative");
    if (!(pi.shape() == members_.front().second.shape())) {
      throw std::invalid_argument("mixture members must share a shape");
    }
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw std::invalid_argument("mixture weights must sum to 1");
  }
}

StochasticPolicy StochasticPolicy::uniform(std::vector<DeterministicPolicy> members) {
  if (members.empty()) throw std::invalid_argument("stochastic policy needs a member");
  const double w = 1.0 / static_cast<double>(members.size());
  std::vector<Member> weighted;
  weighted.reserve(members.size());
  for (auto& pi : members) weighted.emplace_back(w, std::move(pi));
  return StochasticPolicy(std::move(weighted));
}

PolicyShape StochasticPolicy::shape() const {
  return members_.empty() ? PolicyShape{} : members_.front().second.shape();
}

}  // namespace lowswitch
