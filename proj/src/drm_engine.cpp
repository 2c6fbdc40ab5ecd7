#include "drmsim/drm_engine.hpp"

#include "drmsim/thermal.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace drmsim {

namespace {

constexpr double kSeverityTol = 1e-9;

bool trajectory_feasible(const Home& home, const StateSchedule& schedule, const SimClock& clock,
                         const DrmPlan& plan) {
    // Inline simulation with early exit on the severity bound.
    const AcUnit& ac = home.ac;
    const double limit = plan.setpoint_f + plan.max_deviation_f + kSeverityTol;
    double theta = home.initial_temp_f;
    if (theta > limit) return false;
    for (int t = ac.demand_start; t <= ac.demand_end; ++t) {
        const double power = throttle_power(schedule.state[t], ac.num_states, ac.rated_power_kw);
        const double cooling = cooling_capacity_btu_hr(ac.eer, power);
        theta += clock.slot_hours * (home.heat_gain_btu_hr[t] - cooling) / home.thermal_capacity_btu_f;
        if (theta > limit) return false;
    }
    return true;
}

}  // namespace

HomeOutcome home_control(const Home& home, const DrmPlan& plan, LoadProfile& profile,
                         const SimClock& clock) {
    const PlanValidation validation = validate_plan(plan, clock);
    if (!validation.ok())
        throw std::invalid_argument("home_control: invalid plan: " + validation.errors.front());
    const AcUnit& ac = home.ac;
    const int budget = validation.denied_slot_budget;

    HomeOutcome outcome;
    outcome.schedule = StateSchedule::all_rated(clock.slot_count, ac.num_states);

    std::vector<bool> eligible(ac.window_slots(), true);
    int remaining = ac.window_slots();
    while (outcome.denied_slots < budget && remaining > 0) {
        // Local peak among eligible slots, earliest on ties.
        int slot = -1;
        double best = -1.0;
        for (int i = 0; i < ac.window_slots(); ++i) {
            const int t = ac.demand_start + i;
            if (eligible[i] && profile.kw[t] > best) {
                best = profile.kw[t];
                slot = t;
            }
        }
        eligible[slot - ac.demand_start] = false;
        --remaining;

        // Deepest throttle first; accept the first state whose full window
        // trajectory stays within the severity bound.
        int accepted = ac.num_states;
        for (int k = 1; k <= ac.num_states; ++k) {
            outcome.schedule.state[slot] = k;
            if (trajectory_feasible(home, outcome.schedule, clock, plan)) {
                accepted = k;
                break;
            }
        }
        outcome.schedule.state[slot] = accepted;
        if (accepted < ac.num_states) {
            profile.kw[slot] -=
                ac.rated_power_kw - throttle_power(accepted, ac.num_states, ac.rated_power_kw);
            ++outcome.denied_slots;
        }
    }

    outcome.max_severity_observed =
        max_deviation(simulate_trajectory(home, outcome.schedule, clock), plan.setpoint_f);
    outcome.duration_saturated = budget > 0 && outcome.denied_slots == budget;
    return outcome;
}

DrmOutcome sequential_drm(const Community& community, const DrmPlan& plan, const OrderSpec& order) {
    const PlanValidation validation = validate_plan(plan, community.clock);
    if (!validation.ok())
        throw std::invalid_argument("sequential_drm: invalid plan: " + validation.errors.front());

    const int num_homes = static_cast<int>(community.homes.size());
    DrmOutcome outcome;
    outcome.order.resize(num_homes);
    std::iota(outcome.order.begin(), outcome.order.end(), 0);
    switch (order.policy) {
        case OrderPolicy::kIndex:
            break;
        case OrderPolicy::kSeededShuffle: {
            std::mt19937_64 rng(order.seed);
            std::shuffle(outcome.order.begin(), outcome.order.end(), rng);
            break;
        }
        case OrderPolicy::kGiven: {
            if (static_cast<int>(order.given.size()) != num_homes)
                throw std::invalid_argument("sequential_drm: given order must cover every home");
            outcome.order = order.given;
            std::vector<int> sorted = outcome.order;
            std::sort(sorted.begin(), sorted.end());
            for (int j = 0; j < num_homes; ++j)
                if (sorted[j] != j)
                    throw std::invalid_argument("sequential_drm: given order is not a permutation");
            break;
        }
    }

    outcome.baseline = baseline_load(community);
    outcome.per_home.resize(num_homes);
    LoadProfile profile = outcome.baseline;
    for (const int j : outcome.order)
        outcome.per_home[j] = home_control(community.homes[j], plan, profile, community.clock);
    outcome.final = std::move(profile);
    return outcome;
}

std::vector<Violation> audit_schedules(const Community& community, const DrmPlan& plan,
                                       const std::vector<StateSchedule>& schedules) {
    if (schedules.size() != community.homes.size())
        throw std::invalid_argument("audit_schedules: one schedule per home required");
    const SimClock& clock = community.clock;
    const PlanValidation validation = validate_plan(plan, clock);
    if (!validation.ok())
        throw std::invalid_argument("audit_schedules: invalid plan: " + validation.errors.front());

    std::vector<Violation> violations;
    for (std::size_t j = 0; j < community.homes.size(); ++j) {
        const Home& home = community.homes[j];
        const StateSchedule& schedule = schedules[j];
        if (schedule.state.size() != clock.slot_count) {
            violations.push_back({Violation::Kind::kMalformedSchedule, static_cast<int>(j), -1,
                                  "schedule length mismatch"});
            continue;
        }
        bool malformed = false;
        for (int t = 0; t < clock.slot_count; ++t) {
            if (schedule.state[t] < 1 || schedule.state[t] > home.ac.num_states) {
                violations.push_back({Violation::Kind::kMalformedSchedule, static_cast<int>(j), t,
                                      "state out of [1, K]"});
                malformed = true;
            }
        }
        if (malformed) continue;

        const TemperatureTrajectory traj = simulate_trajectory(home, schedule, clock);
        for (int i = 0; i < traj.temps_f.size(); ++i) {
            const double excess = traj.temps_f[i] - plan.setpoint_f;
            if (excess > plan.max_deviation_f + kSeverityTol)
                violations.push_back({Violation::Kind::kSeverity, static_cast<int>(j),
                                      home.ac.demand_start + i,
                                      "severity " + std::to_string(excess) + " F"});
        }

        int denied = 0;
        for (int t = home.ac.demand_start; t <= home.ac.demand_end; ++t)
            if (schedule.state[t] < home.ac.num_states) ++denied;
        if (denied > validation.denied_slot_budget)
            violations.push_back({Violation::Kind::kDuration, static_cast<int>(j), -1,
                                  "denied " + std::to_string(denied) + " slots > budget " +
                                      std::to_string(validation.denied_slot_budget)});
    }
    return violations;
}

std::vector<Violation> audit_constraints(const Community& community, const DrmPlan& plan,
                                         const DrmOutcome& outcome) {
    std::vector<StateSchedule> schedules;
    schedules.reserve(outcome.per_home.size());
    for (const HomeOutcome& h : outcome.per_home) schedules.push_back(h.schedule);
    return audit_schedules(community, plan, schedules);
}

}  // namespace drmsim
