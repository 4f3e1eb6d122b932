#pragma once

#include <cstdint>
#include <vector>

namespace lowswitch {

/// Episode counts per stage.
///
/// For APEVE every stage spends 2 * lengths[k] episodes (crude + fine). For
/// APEVE+ stages 1 and 2 spend 2 * lengths[k] and later stages spend
/// lengths[k] (fine only).
struct StageSchedule {
  std::vector<std::uint64_t> lengths;
  std::uint64_t budget = 0;

  [[nodiscard]] std::size_t stage_count() const noexcept { return lengths.size(); }
};

/// floor(K^(1 - 1/2^k)) for stage k >= 1, computed with a relative guard of
/// 1e-12 so exact powers are not lost to rounding.
std::uint64_t nominal_stage_length(std::uint64_t budget, unsigned stage);

/// APEVE schedule. Each nominal length is rounded down to a multiple of
/// `granularity` (H*S*A when shape-aware, 1 otherwise); the first stage whose
/// nominal length would reach 2 * sum >= K is truncated to (K - 2 * prior) / 2.
/// A truncated tail shorter than `granularity` is added to the previous stage.
/// Requires K even and >= 4, otherwise throws std::invalid_argument.
StageSchedule stage_schedule(std::uint64_t budget, std::uint64_t granularity = 1);

/// APEVE+ schedule: same nominal lengths, truncated so that
/// 2 T1 + 2 T2 + sum_{k>=3} Tk = K.
StageSchedule stage_schedule_plus(std::uint64_t budget, std::uint64_t granularity = 1);

/// Episodes consumed by stage k (0-based) of an APEVE+ schedule.
std::uint64_t plus_stage_cost(const StageSchedule& schedule, std::size_t stage);

}  // namespace lowswitch
