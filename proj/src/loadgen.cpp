#include "drmsim/loadgen.hpp"

#include "drmsim/thermal.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

namespace drmsim {

namespace {

// Relative essential-load shape at hourly knots: overnight trough, morning
// shoulder, evening peak. Scaled per home to the energy target.
constexpr double kEssentialShape[24] = {
    0.45, 0.42, 0.40, 0.40, 0.42, 0.50, 0.70, 0.95, 0.90, 0.80, 0.75, 0.78,
    0.82, 0.80, 0.78, 0.80, 0.90, 1.10, 1.40, 1.55, 1.50, 1.20, 0.85, 0.60};

double interp_hourly(const double* knots, double hour) {
    const double h = std::fmod(hour, 24.0);
    const int i0 = static_cast<int>(std::floor(h)) % 24;
    const int i1 = (i0 + 1) % 24;
    const double frac = h - std::floor(h);
    return knots[i0] * (1.0 - frac) + knots[i1] * frac;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

// Symmetric triangular sample centered on `mode` with the given half-width.
double triangular(std::mt19937_64& rng, double mode, double half_width) {
    const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    if (u < 0.5) return mode - half_width * (1.0 - std::sqrt(2.0 * u));
    return mode + half_width * (1.0 - std::sqrt(2.0 * (1.0 - u)));
}

}  // namespace

void CommunitySpec::validate() const {
    if (num_homes < 1) throw GenerationError("CommunitySpec: num_homes must be >= 1");
    if (ac_rated_power_kw <= 0.0) throw GenerationError("CommunitySpec: ac rated power must be > 0");
    if (ac_eer < kMinEer) throw GenerationError("CommunitySpec: ac_eer must be >= 8.0");
    if (ac_window_hours <= 0.0 || ac_window_hours > 24.0)
        throw GenerationError("CommunitySpec: ac_window_hours must be in (0, 24]");
    if (heat_gain_min_btu_hr <= 0.0 || heat_gain_max_btu_hr < heat_gain_min_btu_hr)
        throw GenerationError("CommunitySpec: heat gain range must be positive and non-empty");
    if (thermal_capacity_min_btu_f <= 0.0 || thermal_capacity_max_btu_f < thermal_capacity_min_btu_f)
        throw GenerationError("CommunitySpec: thermal capacity range must be positive and non-empty");
    if (window_peak_end_hour < window_peak_start_hour)
        throw GenerationError("CommunitySpec: demand peak interval must be non-empty");
}

Community generate_community(const CommunitySpec& spec) {
    spec.validate();
    Community community;
    community.spec = spec;
    community.clock = SimClock::five_minute();
    const SimClock& clock = community.clock;
    const int slot_count = clock.slot_count;

    const double ac_energy_kwh = spec.ac_rated_power_kw * spec.ac_window_hours;
    const double essential_energy_kwh = spec.target_daily_kwh - ac_energy_kwh;
    if (essential_energy_kwh <= 0.0)
        throw GenerationError("generate_community: target daily energy does not cover AC energy");

    const int window_slots = static_cast<int>(std::round(spec.ac_window_hours / clock.slot_hours));
    if (window_slots < 1 || window_slots > slot_count)
        throw GenerationError("generate_community: AC window does not fit in the horizon");

    const double rated_cooling = cooling_capacity_btu_hr(spec.ac_eer, spec.ac_rated_power_kw);
    if (rated_cooling <= spec.heat_gain_max_btu_hr)
        throw GenerationError("generate_community: rated cooling must exceed peak heat gain");

    // Window starts cluster so that demand concentrates in the configured
    // peak interval: triangular around its midpoint minus half a window.
    const double start_mode_hour =
        0.5 * (spec.window_peak_start_hour + spec.window_peak_end_hour) - 0.5 * spec.ac_window_hours;
    const double start_half_width_hours = 6.5;

    // Thermal capacities come from two construction classes drawn from the
    // ends of the configured range: light-frame homes near the minimum (fast
    // OFF rise) and heavy-frame homes near the maximum (slow OFF rise).
    const double capacity_range = spec.thermal_capacity_max_btu_f - spec.thermal_capacity_min_btu_f;
    const double light_band = 0.03 * capacity_range;
    const double heavy_band = 0.016 * capacity_range;
    const double light_fraction = 0.4;

    std::mt19937_64 rng(spec.seed);
    community.homes.reserve(spec.num_homes);
    for (int j = 0; j < spec.num_homes; ++j) {
        Home home;
        home.id = "home-" + std::to_string(j);

        double knots[24];
        for (int h = 0; h < 24; ++h) knots[h] = kEssentialShape[h] * uniform(rng, 0.85, 1.15);

        home.essential_load_kw.resize(slot_count);
        for (int t = 0; t < slot_count; ++t)
            home.essential_load_kw[t] = interp_hourly(knots, t * clock.slot_hours);
        // Exact per-home energy: mean over homes then matches the target.
        const double energy = (home.essential_load_kw * clock.slot_hours).sum();
        home.essential_load_kw *= essential_energy_kwh / energy;

        const double start_hour = triangular(rng, start_mode_hour, start_half_width_hours);
        int start_slot = static_cast<int>(std::lround(start_hour / clock.slot_hours));
        start_slot = std::clamp(start_slot, 0, slot_count - window_slots);

        home.ac.rated_power_kw = spec.ac_rated_power_kw;
        home.ac.eer = spec.ac_eer;
        home.ac.num_states = 2;
        home.ac.demand_start = start_slot;
        home.ac.demand_end = start_slot + window_slots - 1;

        const double gain = uniform(rng, spec.heat_gain_min_btu_hr, spec.heat_gain_max_btu_hr);
        home.heat_gain_btu_hr = Eigen::ArrayXd::Constant(slot_count, gain);

        const bool light_frame =
            std::uniform_real_distribution<double>(0.0, 1.0)(rng) < light_fraction;
        home.thermal_capacity_btu_f =
            light_frame ? uniform(rng, spec.thermal_capacity_min_btu_f,
                                  spec.thermal_capacity_min_btu_f + light_band)
                        : uniform(rng, spec.thermal_capacity_max_btu_f - heavy_band,
                                  spec.thermal_capacity_max_btu_f);
        home.initial_temp_f = spec.initial_temp_f;

        home.validate(clock);
        if (rated_cooling <= home.heat_gain_btu_hr.maxCoeff())
            throw GenerationError("generate_community: pull-down guarantee violated");
        community.homes.push_back(std::move(home));
    }
    return community;
}

Community with_state_count(const Community& community, int num_states) {
    if (num_states < 2) throw std::invalid_argument("with_state_count: num_states must be >= 2");
    Community out = community;
    for (Home& home : out.homes) home.ac.num_states = num_states;
    return out;
}

LoadProfile aggregate_load(const Community& community, const std::vector<StateSchedule>& schedules) {
    if (schedules.size() != community.homes.size())
        throw std::invalid_argument("aggregate_load: one schedule per home required");
    const int slot_count = community.clock.slot_count;
    LoadProfile profile;
    profile.kw = Eigen::ArrayXd::Zero(slot_count);
    for (std::size_t j = 0; j < community.homes.size(); ++j) {
        const Home& home = community.homes[j];
        if (schedules[j].state.size() != slot_count)
            throw std::invalid_argument("aggregate_load: schedule length mismatch");
        profile.kw += home.essential_load_kw;
        for (int t = home.ac.demand_start; t <= home.ac.demand_end; ++t)
            profile.kw[t] += throttle_power(schedules[j].state[t], home.ac.num_states,
                                            home.ac.rated_power_kw);
    }
    return profile;
}

LoadProfile baseline_load(const Community& community) {
    std::vector<StateSchedule> schedules;
    schedules.reserve(community.homes.size());
    for (const Home& home : community.homes)
        schedules.push_back(StateSchedule::all_rated(community.clock.slot_count, home.ac.num_states));
    return aggregate_load(community, schedules);
}

std::pair<double, int> peak(const LoadProfile& profile) {
    if (profile.kw.size() == 0) throw std::invalid_argument("peak: empty profile");
    int slot = 0;
    const double value = profile.kw.maxCoeff(&slot);
    return {value, slot};
}

namespace {

nlohmann::json spec_to_json(const CommunitySpec& spec) {
    return nlohmann::json{{"num_homes", spec.num_homes},
                          {"seed", spec.seed},
                          {"target_daily_kwh", spec.target_daily_kwh},
                          {"ac_rated_power_kw", spec.ac_rated_power_kw},
                          {"ac_eer", spec.ac_eer},
                          {"ac_window_hours", spec.ac_window_hours},
                          {"window_peak_start_hour", spec.window_peak_start_hour},
                          {"window_peak_end_hour", spec.window_peak_end_hour},
                          {"heat_gain_min_btu_hr", spec.heat_gain_min_btu_hr},
                          {"heat_gain_max_btu_hr", spec.heat_gain_max_btu_hr},
                          {"thermal_capacity_min_btu_f", spec.thermal_capacity_min_btu_f},
                          {"thermal_capacity_max_btu_f", spec.thermal_capacity_max_btu_f},
                          {"initial_temp_f", spec.initial_temp_f}};
}

CommunitySpec spec_from_json(const nlohmann::json& j) {
    CommunitySpec spec;
    spec.num_homes = j.at("num_homes").get<int>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    spec.target_daily_kwh = j.at("target_daily_kwh").get<double>();
    spec.ac_rated_power_kw = j.at("ac_rated_power_kw").get<double>();
    spec.ac_eer = j.at("ac_eer").get<double>();
    spec.ac_window_hours = j.at("ac_window_hours").get<double>();
    spec.window_peak_start_hour = j.at("window_peak_start_hour").get<double>();
    spec.window_peak_end_hour = j.at("window_peak_end_hour").get<double>();
    spec.heat_gain_min_btu_hr = j.at("heat_gain_min_btu_hr").get<double>();
    spec.heat_gain_max_btu_hr = j.at("heat_gain_max_btu_hr").get<double>();
    spec.thermal_capacity_min_btu_f = j.at("thermal_capacity_min_btu_f").get<double>();
    spec.thermal_capacity_max_btu_f = j.at("thermal_capacity_max_btu_f").get<double>();
    spec.initial_temp_f = j.at("initial_temp_f").get<double>();
    return spec;
}

std::vector<double> to_vector(const Eigen::ArrayXd& a) {
    return std::vector<double>(a.data(), a.data() + a.size());
}

Eigen::ArrayXd from_vector(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::ArrayXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

std::string community_to_json(const Community& community) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["spec"] = spec_to_json(community.spec);
    j["clock"] = {{"slot_count", community.clock.slot_count},
                  {"slot_hours", community.clock.slot_hours}};
    nlohmann::json homes = nlohmann::json::array();
    for (const Home& home : community.homes) {
        homes.push_back(nlohmann::json{
            {"id", home.id},
            {"essential_load_kw", to_vector(home.essential_load_kw)},
            {"ac",
             {{"rated_power_kw", home.ac.rated_power_kw},
              {"eer", home.ac.eer},
              {"num_states", home.ac.num_states},
              {"demand_start", home.ac.demand_start},
              {"demand_end", home.ac.demand_end}}},
            {"heat_gain_btu_hr", to_vector(home.heat_gain_btu_hr)},
            {"thermal_capacity_btu_f", home.thermal_capacity_btu_f},
            {"initial_temp_f", home.initial_temp_f}});
    }
    j["homes"] = std::move(homes);
    return j.dump();
}

Community community_from_json(const std::string& json_text) {
    const nlohmann::json j = nlohmann::json::parse(json_text);
    if (j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("community_from_json: unsupported schema_version");
    Community community;
    community.spec = spec_from_json(j.at("spec"));
    community.clock.slot_count = j.at("clock").at("slot_count").get<int>();
    community.clock.slot_hours = j.at("clock").at("slot_hours").get<double>();
    community.clock.validate();
    for (const nlohmann::json& hj : j.at("homes")) {
        Home home;
        home.id = hj.at("id").get<std::string>();
        home.essential_load_kw = from_vector(hj.at("essential_load_kw").get<std::vector<double>>());
        const nlohmann::json& aj = hj.at("ac");
        home.ac.rated_power_kw = aj.at("rated_power_kw").get<double>();
        home.ac.eer = aj.at("eer").get<double>();
        home.ac.num_states = aj.at("num_states").get<int>();
        home.ac.demand_start = aj.at("demand_start").get<int>();
        home.ac.demand_end = aj.at("demand_end").get<int>();
        home.heat_gain_btu_hr = from_vector(hj.at("heat_gain_btu_hr").get<std::vector<double>>());
        home.thermal_capacity_btu_f = hj.at("thermal_capacity_btu_f").get<double>();
        home.initial_temp_f = hj.at("initial_temp_f").get<double>();
        home.validate(community.clock);
        community.homes.push_back(std::move(home));
    }
    return community;
}

void save_community(const Community& community, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("save_community: cannot open " + path);
    out << community_to_json(community);
    if (!out) throw std::runtime_error("save_community: write failed for " + path);
}

Community load_community(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("load_community: cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return community_from_json(buf.str());
}

}  // namespace drmsim
