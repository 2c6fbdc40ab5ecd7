#pragma once

#include "drmsim/core_model.hpp"
#include "drmsim/drm_engine.hpp"
#include "drmsim/loadgen.hpp"

#include <cstdint>
#include <vector>

namespace drmsim {

struct OracleResult {
    double optimal_peak_kw = 0.0;
    std::vector<StateSchedule> schedules;  // lexicographically smallest argmin
    std::uint64_t explored = 0;            // complete assignments evaluated
};

class OracleCapError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultOracleCap = 10'000'000;

/// Exhaustive minimization of the community peak over all per-home state
/// assignments in the demand windows, subject to the plan's severity and
/// denied-duration constraints. Prunes assignments whose partial trajectory
/// already violates the severity bound. Refuses instances whose raw search
/// space exceeds the cap.
OracleResult brute_force_min_peak(const Community& community, const DrmPlan& plan,
                                  std::uint64_t cap = kDefaultOracleCap);

struct GreedyComparison {
    double greedy_peak_kw = 0.0;
    double oracle_peak_kw = 0.0;
    double gap_kw = 0.0;
};

/// Runs the greedy engine and the exact solver on the same instance.
GreedyComparison compare_greedy(const Community& community, const DrmPlan& plan,
                                const OrderSpec& order = {OrderPolicy::kIndex, 0, {}},
                                std::uint64_t cap = kDefaultOracleCap);

}  // namespace drmsim
