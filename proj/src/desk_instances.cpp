#include "drmsim/desk_instances.hpp"

#include <random>
#include <string>

namespace drmsim {

std::pair<Community, DrmPlan> random_desk_instance(std::uint64_t seed, int num_homes,
                                                   int num_states) {
    if (num_homes < 1 || num_states < 2)
        throw std::invalid_argument("random_desk_instance: need >= 1 home and K >= 2");
    std::mt19937_64 rng(seed);
    auto uniform = [&](double lo, double hi) {
        return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    };
    auto uniform_int = [&](int lo, int hi) {
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    Community community;
    community.clock = SimClock{12, 2.0};  // coarse 2-hour slots
    community.spec.num_homes = num_homes;
    community.spec.seed = seed;

    // Keep the raw search space within the exhaustive solver's default cap.
    const int max_window = num_states >= 3 ? 4 : 5;

    for (int j = 0; j < num_homes; ++j) {
        Home home;
        home.id = "desk-" + std::to_string(j);
        home.essential_load_kw.resize(community.clock.slot_count);
        for (int t = 0; t < community.clock.slot_count; ++t)
            home.essential_load_kw[t] = uniform(0.2, 1.5);

        const int window = uniform_int(3, max_window);
        const int start = uniform_int(0, community.clock.slot_count - window);
        home.ac.rated_power_kw = uniform(2.0, 5.0);
        home.ac.eer = 10.0;
        home.ac.num_states = num_states;
        home.ac.demand_start = start;
        home.ac.demand_end = start + window - 1;

        // Roughly 1-3 F rise per 2-hour slot when the AC is off.
        home.thermal_capacity_btu_f = 1000.0;
        home.heat_gain_btu_hr.resize(community.clock.slot_count);
        for (int t = 0; t < community.clock.slot_count; ++t)
            home.heat_gain_btu_hr[t] = uniform(500.0, 1500.0);

        home.initial_temp_f = 65.0;
        home.validate(community.clock);
        community.homes.push_back(std::move(home));
    }

    DrmPlan plan;
    plan.setpoint_f = 65.0;
    plan.max_deviation_f = uniform(1.0, 4.0);
    plan.max_denied_hours = 2.0 * uniform_int(1, 3);
    return {std::move(community), plan};
}

}  // namespace drmsim
