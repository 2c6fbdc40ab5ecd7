#include "drmsim/scenario.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace drmsim {

namespace {

std::string fmt(const char* spec, double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, value);
    return buf;
}

std::string time_of_day(int slot, const SimClock& clock) {
    const int minutes = static_cast<int>(std::lround(slot * clock.slot_hours * 60.0));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d:%02d", (minutes / 60) % 24, minutes % 60);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << text;
    if (!out) throw std::runtime_error("write failed: " + path);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

DrmPlan plan_from_json(const nlohmann::json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": plan must be an object");
    DrmPlan plan;
    try {
        plan.setpoint_f = j.at("setpoint_f").get<double>();
        plan.max_deviation_f = j.at("max_deviation_f").get<double>();
        plan.max_denied_hours = j.at("max_denied_hours").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(where + ": " + e.what());
    }
    return plan;
}

CommunitySpec community_spec_from_json(const nlohmann::json& j) {
    CommunitySpec spec;  // absent fields keep their defaults
    spec.num_homes = j.value("num_homes", spec.num_homes);
    spec.seed = j.value("seed", spec.seed);
    spec.target_daily_kwh = j.value("target_daily_kwh", spec.target_daily_kwh);
    spec.ac_rated_power_kw = j.value("ac_rated_power_kw", spec.ac_rated_power_kw);
    spec.ac_eer = j.value("ac_eer", spec.ac_eer);
    spec.ac_window_hours = j.value("ac_window_hours", spec.ac_window_hours);
    spec.window_peak_start_hour = j.value("window_peak_start_hour", spec.window_peak_start_hour);
    spec.window_peak_end_hour = j.value("window_peak_end_hour", spec.window_peak_end_hour);
    spec.heat_gain_min_btu_hr = j.value("heat_gain_min_btu_hr", spec.heat_gain_min_btu_hr);
    spec.heat_gain_max_btu_hr = j.value("heat_gain_max_btu_hr", spec.heat_gain_max_btu_hr);
    spec.thermal_capacity_min_btu_f =
        j.value("thermal_capacity_min_btu_f", spec.thermal_capacity_min_btu_f);
    spec.thermal_capacity_max_btu_f =
        j.value("thermal_capacity_max_btu_f", spec.thermal_capacity_max_btu_f);
    spec.initial_temp_f = j.value("initial_temp_f", spec.initial_temp_f);
    return spec;
}

}  // namespace

void ScenarioConfig::validate(const SimClock& clock) const {
    if (plans.empty()) throw ConfigError("config.plans: must be non-empty");
    if (state_counts.empty()) throw ConfigError("config.state_counts: must be non-empty");
    for (std::size_t i = 0; i < plans.size(); ++i) {
        const PlanValidation v = validate_plan(plans[i], clock);
        if (!v.ok())
            throw ConfigError("config.plans[" + std::to_string(i) + "]: " + v.errors.front());
    }
    for (const int k : state_counts)
        if (k < 2) throw ConfigError("config.state_counts: every K must be >= 2");
    if (!community && !community_file)
        throw ConfigError("config: one of community / community_file is required");
}

ScenarioConfig parse_scenario_config(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: invalid JSON: ") + e.what());
    }
    if (j.value("schema_version", 1) != 1)
        throw ConfigError("config.schema_version: unsupported version");

    ScenarioConfig config;
    if (j.contains("community")) config.community = community_spec_from_json(j.at("community"));
    if (j.contains("community_file"))
        config.community_file = j.at("community_file").get<std::string>();
    if (!j.contains("plans") || !j.at("plans").is_array())
        throw ConfigError("config.plans: required array");
    int idx = 0;
    for (const nlohmann::json& pj : j.at("plans"))
        config.plans.push_back(plan_from_json(pj, "config.plans[" + std::to_string(idx++) + "]"));
    if (!j.contains("state_counts") || !j.at("state_counts").is_array())
        throw ConfigError("config.state_counts: required array");
    for (const nlohmann::json& kj : j.at("state_counts")) config.state_counts.push_back(kj.get<int>());

    const std::string policy = j.value("order_policy", std::string("seeded-shuffle"));
    if (policy == "seeded-shuffle")
        config.order.policy = OrderPolicy::kSeededShuffle;
    else if (policy == "index")
        config.order.policy = OrderPolicy::kIndex;
    else if (policy == "given")
        config.order.policy = OrderPolicy::kGiven;
    else
        throw ConfigError("config.order_policy: expected seeded-shuffle | index | given");
    config.order.seed = j.value("order_seed", std::uint64_t{0});
    if (j.contains("order")) config.order.given = j.at("order").get<std::vector<int>>();
    config.output_dir = j.value("output_dir", std::string("."));
    return config;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    return parse_scenario_config(read_file(path));
}

CommunitySpec parse_community_spec(const std::string& json_text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("community spec: invalid JSON: ") + e.what());
    }
    // Accept either a bare spec or a scenario config with a community block.
    return community_spec_from_json(j.contains("community") ? j.at("community") : j);
}

ScenarioResult run_scenarios(const ScenarioConfig& config) {
    ScenarioResult result;
    if (config.community_file)
        result.community = load_community(*config.community_file);
    else if (config.community)
        result.community = generate_community(*config.community);
    else
        throw ConfigError("config: one of community / community_file is required");
    config.validate(result.community.clock);

    const auto [baseline_peak, baseline_slot] = peak(baseline_load(result.community));
    (void)baseline_slot;
    for (const DrmPlan& plan : config.plans) {
        for (const int k : config.state_counts) {
            const Community cell = with_state_count(result.community, k);
            DrmOutcome outcome = sequential_drm(cell, plan, config.order);
            ResultRow row;
            row.setpoint_f = plan.setpoint_f;
            row.max_deviation_f = plan.max_deviation_f;
            row.max_denied_hours = plan.max_denied_hours;
            row.k_states = k;
            row.baseline_peak_kw = baseline_peak;
            row.final_peak_kw = peak(outcome.final).first;
            row.reduction_pct = 100.0 * (row.baseline_peak_kw - row.final_peak_kw) /
                                row.baseline_peak_kw;
            for (const HomeOutcome& h : outcome.per_home)
                if (h.duration_saturated) ++row.homes_saturated;
            result.rows.push_back(row);
            result.outcomes.push_back(std::move(outcome));
        }
    }
    return result;
}

std::string format_report(const std::vector<ResultRow>& rows, ReportFormat format) {
    if (rows.empty()) throw std::invalid_argument("format_report: no rows");
    if (format == ReportFormat::kCsv) {
        std::string out =
            "setpoint_f,max_dev_f,max_dur_h,k_states,baseline_peak_kw,final_peak_kw,"
            "reduction_pct,homes_saturated\n";
        for (const ResultRow& r : rows) {
            out += fmt("%.10g", r.setpoint_f) + "," + fmt("%.10g", r.max_deviation_f) + "," +
                   fmt("%.10g", r.max_denied_hours) + "," + std::to_string(r.k_states) + "," +
                   fmt("%.10g", r.baseline_peak_kw) + "," + fmt("%.10g", r.final_peak_kw) + "," +
                   fmt("%.1f", r.reduction_pct) + "," + std::to_string(r.homes_saturated) + "\n";
        }
        return out;
    }
    nlohmann::json j = nlohmann::json::array();
    for (const ResultRow& r : rows) {
        j.push_back(nlohmann::json{{"setpoint_f", r.setpoint_f},
                                   {"max_dev_f", r.max_deviation_f},
                                   {"max_dur_h", r.max_denied_hours},
                                   {"k_states", r.k_states},
                                   {"baseline_peak_kw", r.baseline_peak_kw},
                                   {"final_peak_kw", r.final_peak_kw},
                                   {"reduction_pct", std::round(r.reduction_pct * 10.0) / 10.0},
                                   {"homes_saturated", r.homes_saturated}});
    }
    return j.dump(2) + "\n";
}

void emit_report(const std::vector<ResultRow>& rows, ReportFormat format, const std::string& path) {
    write_file(path, format_report(rows, format));
}

std::vector<ResultRow> parse_report_csv(const std::string& csv_text) {
    std::istringstream in(csv_text);
    std::string line;
    if (!std::getline(in, line)) throw std::invalid_argument("parse_report_csv: empty input");
    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        ResultRow r;
        std::istringstream ls(line);
        std::string field;
        auto next = [&]() {
            if (!std::getline(ls, field, ',')) throw std::invalid_argument("parse_report_csv: short row");
            return field;
        };
        r.setpoint_f = std::stod(next());
        r.max_deviation_f = std::stod(next());
        r.max_denied_hours = std::stod(next());
        r.k_states = std::stoi(next());
        r.baseline_peak_kw = std::stod(next());
        r.final_peak_kw = std::stod(next());
        r.reduction_pct = std::stod(next());
        r.homes_saturated = std::stoi(next());
        rows.push_back(r);
    }
    return rows;
}

std::string format_profiles(const DrmOutcome& outcome, const SimClock& clock) {
    if (outcome.baseline.kw.size() != clock.slot_count ||
        outcome.final.kw.size() != clock.slot_count)
        throw std::invalid_argument("format_profiles: profile length mismatch");
    std::string out = "slot_index,time_of_day,baseline_kw,drm_kw\n";
    for (int t = 0; t < clock.slot_count; ++t) {
        out += std::to_string(t) + "," + time_of_day(t, clock) + "," +
               fmt("%.6f", outcome.baseline.kw[t]) + "," + fmt("%.6f", outcome.final.kw[t]) + "\n";
    }
    return out;
}

void emit_profiles(const DrmOutcome& outcome, const SimClock& clock, const std::string& path) {
    write_file(path, format_profiles(outcome, clock));
}

std::string outcome_to_json(const DrmOutcome& outcome, const DrmPlan& plan, int k_states) {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["plan"] = {{"setpoint_f", plan.setpoint_f},
                 {"max_deviation_f", plan.max_deviation_f},
                 {"max_denied_hours", plan.max_denied_hours}};
    j["k_states"] = k_states;
    j["order"] = outcome.order;
    j["baseline_kw"] = std::vector<double>(outcome.baseline.kw.data(),
                                           outcome.baseline.kw.data() + outcome.baseline.kw.size());
    j["final_kw"] = std::vector<double>(outcome.final.kw.data(),
                                        outcome.final.kw.data() + outcome.final.kw.size());
    nlohmann::json homes = nlohmann::json::array();
    for (const HomeOutcome& h : outcome.per_home) {
        homes.push_back(nlohmann::json{
            {"state", std::vector<int>(h.schedule.state.data(),
                                       h.schedule.state.data() + h.schedule.state.size())},
            {"denied_slots", h.denied_slots},
            {"max_severity_observed", h.max_severity_observed},
            {"duration_saturated", h.duration_saturated}});
    }
    j["per_home"] = std::move(homes);
    return j.dump();
}

void save_outcome(const DrmOutcome& outcome, const DrmPlan& plan, int k_states,
                  const std::string& path) {
    write_file(path, outcome_to_json(outcome, plan, k_states));
}

SavedOutcome load_outcome(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(read_file(path));
    if (j.at("schema_version").get<int>() != 1)
        throw std::invalid_argument("load_outcome: unsupported schema_version");
    SavedOutcome saved;
    saved.plan.setpoint_f = j.at("plan").at("setpoint_f").get<double>();
    saved.plan.max_deviation_f = j.at("plan").at("max_deviation_f").get<double>();
    saved.plan.max_denied_hours = j.at("plan").at("max_denied_hours").get<double>();
    saved.k_states = j.at("k_states").get<int>();
    saved.outcome.order = j.at("order").get<std::vector<int>>();
    const auto baseline = j.at("baseline_kw").get<std::vector<double>>();
    const auto final_kw = j.at("final_kw").get<std::vector<double>>();
    saved.outcome.baseline.kw =
        Eigen::Map<const Eigen::ArrayXd>(baseline.data(), static_cast<Eigen::Index>(baseline.size()));
    saved.outcome.final.kw =
        Eigen::Map<const Eigen::ArrayXd>(final_kw.data(), static_cast<Eigen::Index>(final_kw.size()));
    for (const nlohmann::json& hj : j.at("per_home")) {
        HomeOutcome h;
        const auto state = hj.at("state").get<std::vector<int>>();
        h.schedule.state =
            Eigen::Map<const Eigen::ArrayXi>(state.data(), static_cast<Eigen::Index>(state.size()));
        h.denied_slots = hj.at("denied_slots").get<int>();
        h.max_severity_observed = hj.at("max_severity_observed").get<double>();
        h.duration_saturated = hj.at("duration_saturated").get<bool>();
        saved.outcome.per_home.push_back(std::move(h));
    }
    return saved;
}

}  // namespace drmsim
