#pragma once

#include "drmsim/core_model.hpp"
#include "drmsim/loadgen.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace drmsim {

/// Result of running the home controller for one home.
struct HomeOutcome {
    StateSchedule schedule;
    int denied_slots = 0;             // slots served below rated power
    double max_severity_observed = 0.0;
    bool duration_saturated = false;  // denied budget exhausted (and non-zero)
};

struct DrmOutcome {
    LoadProfile baseline;
    LoadProfile final;
    std::vector<HomeOutcome> per_home;  // indexed by home, not by visit order
    std::vector<int> order;             // visit order (home indices)
};

enum class OrderPolicy { kIndex, kSeededShuffle, kGiven };

struct OrderSpec {
    OrderPolicy policy = OrderPolicy::kSeededShuffle;
    std::uint64_t seed = 0;
    std::vector<int> given;  // used when policy == kGiven
};

/// Greedy state selection for one home against the current community profile.
/// Repeatedly targets the highest remaining load slot in the home's demand
/// window and throttles as deep as the severity bound allows, checking the
/// full window trajectory. Returns the outcome and the updated profile.
HomeOutcome home_control(const Home& home, const DrmPlan& plan, LoadProfile& profile,
                         const SimClock& clock);

/// Grid-controller orchestration: visits homes in the chosen order, threading
/// the aggregated profile through each home controller.
DrmOutcome sequential_drm(const Community& community, const DrmPlan& plan, const OrderSpec& order);

struct Violation {
    enum class Kind { kSeverity, kDuration, kMalformedSchedule };
    Kind kind;
    int home = -1;
    int slot = -1;  // -1 for per-home violations
    std::string detail;
};

/// Independent re-check of an outcome against the plan's constraints:
/// trajectories recomputed from the schedules, denied counts recounted.
std::vector<Violation> audit_constraints(const Community& community, const DrmPlan& plan,
                                         const DrmOutcome& outcome);

/// Same audit for a bare set of schedules (used for oracle output).
std::vector<Violation> audit_schedules(const Community& community, const DrmPlan& plan,
                                       const std::vector<StateSchedule>& schedules);

}  // namespace drmsim
