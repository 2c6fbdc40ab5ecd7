#pragma once

#include "drmsim/core_model.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace drmsim {

/// Parameters of the synthetic community generator. Defaults reproduce a
/// 1000-home community with 5 kW / EER-10 ACs run for four consecutive
/// hours, concentrated in the early afternoon.
struct CommunitySpec {
    int num_homes = 1000;
    std::uint64_t seed = 20140601;
    double target_daily_kwh = 41.0;
    double ac_rated_power_kw = 5.0;
    double ac_eer = 10.0;
    double ac_window_hours = 4.0;
    double window_peak_start_hour = 13.0;  // demand concentration interval
    double window_peak_end_hour = 18.0;
    // Heat gain sits just below rated cooling: at full power the AC holds
    // the room at the setpoint, so OFF time is what drives the temperature.
    double heat_gain_min_btu_hr = 49960.0;
    double heat_gain_max_btu_hr = 49995.0;
    // Capacity is drawn from the two ends of this range (light-frame and
    // heavy-frame construction classes). The low end gives an OFF rise near
    // 1.9 F per 5-minute slot, the high end near 0.66 F per slot, so a 3-5 F
    // severity bound buys each home only a handful of denied slots.
    double thermal_capacity_min_btu_f = 2095.0;
    double thermal_capacity_max_btu_f = 6393.0;
    double initial_temp_f = 65.0;

    void validate() const;
};

struct Community {
    CommunitySpec spec;
    SimClock clock;
    std::vector<Home> homes;
};

class GenerationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Deterministic synthetic community for a given spec (seed included).
Community generate_community(const CommunitySpec& spec);

/// Copy of a community with every AC set to the given state count.
Community with_state_count(const Community& community, int num_states);

/// Community-wide load: essential loads plus each AC's throttled power
/// inside its demand window.
LoadProfile aggregate_load(const Community& community, const std::vector<StateSchedule>& schedules);

/// Baseline load with every AC at rated power in its window.
LoadProfile baseline_load(const Community& community);

/// Maximum load and the earliest slot attaining it.
std::pair<double, int> peak(const LoadProfile& profile);

// JSON snapshot of a community, re-loadable without regeneration.
std::string community_to_json(const Community& community);
Community community_from_json(const std::string& json_text);
void save_community(const Community& community, const std::string& path);
Community load_community(const std::string& path);

}  // namespace drmsim
