#include "lowswitch/schedule.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace lowswitch {

namespace {

void check_budget(std::uint64_t budget, std::uint64_t granularity) {
  if (budget < 4 || budget % 2 != 0) {
    throw std::invalid_argument("episode budget K must be even and >= 4, got " +
                                std::to_string(budget));
  }
  if (granularity == 0) throw std::invalid_argument("granularity must be positive");
}

std::uint64_t rounded_length(std::uint64_t budget, unsigned stage, std::uint64_t granularity) {
  const std::uint64_t t = nominal_stage_length(budget, stage);
  return t / granularity * granularity;
}

}  // namespace

std::uint64_t nominal_stage_length(std::uint64_t budget, unsigned stage) {
  if (stage == 0) throw std::invalid_argument("stages are numbered from 1");
  const long double exponent = 1.0L - std::ldexp(1.0L, -static_cast<int>(stage));
  const long double value = std::pow(static_cast<long double>(budget), exponent);
  return static_cast<std::uint64_t>(std::floor(value * (1.0L + 1e-12L)));
}

StageSchedule stage_schedule(std::uint64_t budget, std::uint64_t granularity) {
  check_budget(budget, granularity);
  StageSchedule out;
  out.budget = budget;
  std::uint64_t spent = 0;  // sum of lengths so far
  for (unsigned k = 1;; ++k) {
    const std::uint64_t t = rounded_length(budget, k, granularity);
    if (2 * (spent + t) >= budget) {
      const std::uint64_t last = (budget - 2 * spent) / 2;
      // A tail shorter than one granule cannot feed every planned policy, so
      // it is folded into the previous stage.
      if (last < granularity && !out.lengths.empty()) {
        out.lengths.back() += last;
      } else {
        out.lengths.push_back(last);
      }
      break;
    }
    if (t == 0) {
      // Nominal length below one granule: nothing can be scheduled before the
      // final stage, so move straight to truncation on the next round.
      continue;
    }
    out.lengths.push_back(t);
    spent += t;
  }
  return out;
}

StageSchedule stage_schedule_plus(std::uint64_t budget, std::uint64_t granularity) {
  check_budget(budget, granularity);
  StageSchedule out;
  out.budget = budget;
  std::uint64_t spent = 0;  // episodes consumed so far
  for (unsigned k = 1;; ++k) {
    const std::uint64_t t = rounded_length(budget, k, granularity);
    // Stages are weighted by position, so a skipped zero-length stage does
    // not shift the weights.
    const std::uint64_t weight = out.lengths.size() < 2 ? 2 : 1;
    if (spent + weight * t >= budget) {
      const std::uint64_t rest = budget - spent;
      const std::uint64_t last = rest / weight;
      if (last < granularity && !out.lengths.empty()) {
        // rest is even whenever the previous stage is weighted 2, because K
        // and every earlier cost are even.
        out.lengths.back() += out.lengths.size() <= 2 ? rest / 2 : rest;
      } else {
        out.lengths.push_back(last);
      }
      break;
    }
    if (t == 0) continue;
    out.lengths.push_back(t);
    spent += weight * t;
  }
  return out;
}

std::uint64_t plus_stage_cost(const StageSchedule& schedule, std::size_t stage) {
  return (stage < 2 ? 2 : 1) * schedule.lengths.at(stage);
}

}  // namespace lowswitch
