#include "lowswitch/policy_space.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include "lowswitch/dynamic_programming.hpp"
#include "lowswitch/errors.hpp"

namespace lowswitch {

std::uint64_t policy_count(const PolicyShape& shape) {
  if (shape.actions == 0 || shape.states == 0 || shape.horizon == 0) {
    throw std::invalid_argument("policy shape needs S, A, H >= 1");
  }
  std::uint64_t count = 1;
  const std::size_t digits = shape.states * shape.horizon;
  for (std::size_t i = 0; i < digits; ++i) {
    count *= shape.actions;
    if (count > kMaxPolicyCount) {
      throw std::invalid_argument("A^(S*H) exceeds the explicit version-space cap of 2^24 (S=" +
                                  std::to_string(shape.states) +
                                  ", A=" + std::to_string(shape.actions) +
                                  ", H=" + std::to_string(shape.horizon) + ")");
    }
  }
  return count;
}

std::uint64_t encode(const DeterministicPolicy& policy) {
  const auto& shape = policy.shape();
  policy_count(shape);
  const auto& table = policy.table();
  std::uint64_t index = 0;
  for (std::size_t j = table.size(); j-- > 0;) index = index * shape.actions + table[j];
  return index;
}

DeterministicPolicy decode(std::uint64_t index, const PolicyShape& shape) {
  const std::uint64_t count = policy_count(shape);
  if (index >= count) {
    throw std::invalid_argument("policy index " + std::to_string(index) + " >= A^(S*H) = " +
                                std::to_string(count));
  }
  std::vector<std::uint32_t> table(shape.horizon * shape.states);
  for (auto& digit : table) {
    digit = static_cast<std::uint32_t>(index % shape.actions);
    index /= shape.actions;
  }
  return DeterministicPolicy(shape, std::move(table));
}

VersionSpace VersionSpace::empty(const PolicyShape& shape) {
  VersionSpace v;
  v.shape_ = shape;
  v.universe_ = policy_count(shape);
  v.words_.assign((v.universe_ + 63) / 64, 0);
  return v;
}

VersionSpace VersionSpace::full(const PolicyShape& shape) {
  VersionSpace v = empty(shape);
  for (std::uint64_t w = 0; w < v.words_.size(); ++w) {
    const std::uint64_t lo = w * 64;
    const std::uint64_t n = std::min<std::uint64_t>(64, v.universe_ - lo);
    v.words_[w] = n == 64 ? ~std::uint64_t{0} : ((std::uint64_t{1} << n) - 1);
  }
  v.count_ = v.universe_;
  return v;
}

VersionSpace VersionSpace::of(const PolicyShape& shape, const std::vector<std::uint64_t>& indices) {
  VersionSpace v = empty(shape);
  for (auto i : indices) {
    if (i >= v.universe_) throw std::invalid_argument("policy index out of range");
    v.set(i);
  }
  return v;
}

void VersionSpace::set(std::uint64_t index) {
  auto& word = words_[index / 64];
  const std::uint64_t bit = std::uint64_t{1} << (index % 64);
  if ((word & bit) == 0) {
    word |= bit;
    ++count_;
  }
}

bool VersionSpace::contains(std::uint64_t index) const {
  if (index >= universe_) return false;
  return (words_[index / 64] >> (index % 64)) & 1U;
}

void VersionSpace::for_each(const std::function<void(std::uint64_t)>& fn) const {
  for (std::uint64_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      const int bit = std::countr_zero(word);
      fn(w * 64 + static_cast<std::uint64_t>(bit));
      word &= word - 1;
    }
  }
}

std::vector<std::uint64_t> VersionSpace::members() const {
  std::vector<std::uint64_t> out;
  out.reserve(count_);
  for_each([&](std::uint64_t i) { out.push_back(i); });
  return out;
}

bool VersionSpace::is_subset_of(const VersionSpace& other) const {
  if (!(shape_ == other.shape_)) return false;
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if ((words_[w] & ~other.words_[w]) != 0) return false;
  }
  return true;
}

BestPolicy best_in_set_by_scan(const VersionSpace& space, const RewardFunction& reward,
                               const TabularMDP& mdp) {
  if (space.empty()) throw PreconditionError("best_in_set called on an empty version space");
  BestPolicy best;
  bool first = true;
  space.for_each([&](std::uint64_t index) {
    DeterministicPolicy pi = decode(index, space.shape());
    const double v = value_of_policy(pi, reward, mdp);
    if (first || v > best.value) {
      best = {std::move(pi), index, v};
      first = false;
    }
  });
  return best;
}

BestPolicy best_in_set(const VersionSpace& space, const RewardFunction& reward,
                       const TabularMDP& mdp) {
  if (space.empty()) throw PreconditionError("best_in_set called on an empty version space");
  if (space.is_full()) {
    auto solution = optimal_value_and_policy(reward, mdp);
    if (!(solution.policy.shape() == space.shape())) {
      throw std::invalid_argument("version space shape does not match the MDP");
    }
    const std::uint64_t index = encode(solution.policy);
    return {std::move(solution.policy), index, solution.value};
  }
  return best_in_set_by_scan(space, reward, mdp);
}

VersionSpace eliminate(const VersionSpace& space, const PolicyPredicate& predicate) {
  std::vector<std::uint64_t> kept;
  kept.reserve(space.size());
  space.for_each([&](std::uint64_t index) {
    if (!predicate(index, decode(index, space.shape()))) kept.push_back(index);
  });
  return VersionSpace::of(space.shape(), kept);
}

}  // namespace lowswitch
