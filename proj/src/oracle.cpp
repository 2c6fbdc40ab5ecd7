#include "drmsim/oracle.hpp"

#include "drmsim/thermal.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace drmsim {

namespace {

constexpr double kSeverityTol = 1e-9;

struct HomeDigits {
    int home = 0;
    int slot = 0;  // absolute slot index
};

}  // namespace

OracleResult brute_force_min_peak(const Community& community, const DrmPlan& plan,
                                  std::uint64_t cap) {
    const SimClock& clock = community.clock;
    const PlanValidation validation = validate_plan(plan, clock);
    if (!validation.ok())
        throw std::invalid_argument("brute_force_min_peak: invalid plan: " +
                                    validation.errors.front());
    const int budget = validation.denied_slot_budget;
    const int num_homes = static_cast<int>(community.homes.size());

    // Raw search-space size Prod_j K_j^window_j against the cap.
    long double space = 1.0L;
    for (const Home& home : community.homes)
        space *= std::pow(static_cast<long double>(home.ac.num_states),
                          static_cast<long double>(home.ac.window_slots()));
    if (space > static_cast<long double>(cap))
        throw OracleCapError("brute_force_min_peak: search space " +
                             std::to_string(static_cast<double>(space)) + " exceeds cap " +
                             std::to_string(cap));

    // Flatten (home, window slot) into one digit sequence, homes in index
    // order, slots in time order: DFS in ascending-state order then visits
    // assignments lexicographically.
    std::vector<HomeDigits> digits;
    for (int j = 0; j < num_homes; ++j)
        for (int t = community.homes[j].ac.demand_start; t <= community.homes[j].ac.demand_end; ++t)
            digits.push_back({j, t});
    const int num_digits = static_cast<int>(digits.size());

    Eigen::ArrayXd profile = Eigen::ArrayXd::Zero(clock.slot_count);
    for (const Home& home : community.homes) profile += home.essential_load_kw;

    std::vector<StateSchedule> assignment;
    assignment.reserve(num_homes);
    for (const Home& home : community.homes)
        assignment.push_back(StateSchedule::all_rated(clock.slot_count, home.ac.num_states));

    const double limit = plan.setpoint_f + plan.max_deviation_f + kSeverityTol;
    std::vector<int> denied(num_homes, 0);
    // theta[d] = room temperature of digits[d].home entering that slot.
    std::vector<double> theta(num_digits + 1, 0.0);

    OracleResult result;
    result.optimal_peak_kw = std::numeric_limits<double>::infinity();
    bool found = false;

    auto recurse = [&](auto&& self, int d) -> void {
        if (d == num_digits) {
            ++result.explored;
            const double pk = profile.maxCoeff();
            if (pk < result.optimal_peak_kw) {
                result.optimal_peak_kw = pk;
                result.schedules = assignment;
                found = true;
            }
            return;
        }
        const Home& home = community.homes[digits[d].home];
        const int t = digits[d].slot;
        const bool first_slot = t == home.ac.demand_start;
        const double theta_in = first_slot ? home.initial_temp_f : theta[d];
        if (first_slot && theta_in > limit) return;  // no schedule can fix the start

        for (int k = 1; k <= home.ac.num_states; ++k) {
            const bool is_denied = k < home.ac.num_states;
            if (is_denied && denied[digits[d].home] >= budget) continue;
            const double power = throttle_power(k, home.ac.num_states, home.ac.rated_power_kw);
            const double cooling = cooling_capacity_btu_hr(home.ac.eer, power);
            const double theta_out =
                theta_in + clock.slot_hours * (home.heat_gain_btu_hr[t] - cooling) /
                               home.thermal_capacity_btu_f;
            if (theta_out > limit) continue;  // prunes the whole subtree

            assignment[digits[d].home].state[t] = k;
            profile[t] += power;
            if (is_denied) ++denied[digits[d].home];
            theta[d + 1] = theta_out;
            self(self, d + 1);
            if (is_denied) --denied[digits[d].home];
            profile[t] -= power;
            assignment[digits[d].home].state[t] = home.ac.num_states;
        }
    };
    recurse(recurse, 0);

    if (!found)
        throw std::runtime_error("brute_force_min_peak: no feasible assignment (infeasible instance)");
    return result;
}

GreedyComparison compare_greedy(const Community& community, const DrmPlan& plan,
                                const OrderSpec& order, std::uint64_t cap) {
    const DrmOutcome greedy = sequential_drm(community, plan, order);
    const OracleResult exact = brute_force_min_peak(community, plan, cap);
    GreedyComparison cmp;
    cmp.greedy_peak_kw = peak(greedy.final).first;
    cmp.oracle_peak_kw = exact.optimal_peak_kw;
    cmp.gap_kw = cmp.greedy_peak_kw - cmp.oracle_peak_kw;
    return cmp;
}

}  // namespace drmsim
