#include "lowswitch/tuple_set.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace lowswitch {

TupleSet::TupleSet(std::size_t horizon, std::size_t states, std::size_t actions)
    : horizon_(horizon),
      states_(states),
      actions_(actions),
      member_(horizon * states * actions * states, 0) {}

TupleSet TupleSet::all(std::size_t horizon, std::size_t states, std::size_t actions) {
  TupleSet out(horizon, states, actions);
  std::fill(out.member_.begin(), out.member_.end(), std::uint8_t{1});
  out.count_ = out.member_.size();
  return out;
}

void TupleSet::check(const TransitionTuple& t) const {
  if (t.h >= horizon_ || t.s >= states_ || t.a >= actions_ || t.next >= states_) {
    throw std::invalid_argument("transition tuple (" + std::to_string(t.h) + "," +
                                std::to_string(t.s) + "," + std::to_string(t.a) + "," +
                                std::to_string(t.next) + ") out of range");
  }
}

bool TupleSet::insert(const TransitionTuple& t) {
  check(t);
  auto& slot = member_[offset(t.h, t.s, t.a, t.next)];
  if (slot != 0) return false;
  slot = 1;
  ++count_;
  return true;
}

bool TupleSet::contains(const TransitionTuple& t) const {
  check(t);
  return member_[offset(t.h, t.s, t.a, t.next)] != 0;
}

std::vector<TransitionTuple> TupleSet::tuples() const {
  std::vector<TransitionTuple> out;
  out.reserve(count_);
  for (std::size_t h = 0; h < horizon_; ++h)
    for (std::size_t s = 0; s < states_; ++s)
      for (std::size_t a = 0; a < actions_; ++a)
        for (std::size_t n = 0; n < states_; ++n)
          if (contains(h, s, a, n)) out.push_back({h, s, a, n});
  return out;
}

}  // namespace lowswitch
