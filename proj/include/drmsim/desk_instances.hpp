#pragma once

#include "drmsim/core_model.hpp"
#include "drmsim/loadgen.hpp"

#include <cstdint>
#include <utility>

namespace drmsim {

/// Seeded tiny instances (coarse 2-hour slots, a few homes, short demand
/// windows) small enough for the exhaustive solver. The paired plan always
/// has a denied-slot budget that fits the windows.
std::pair<Community, DrmPlan> random_desk_instance(std::uint64_t seed, int num_homes,
                                                   int num_states);

}  // namespace drmsim
