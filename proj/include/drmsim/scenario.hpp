#pragma once

#include "drmsim/core_model.hpp"
#include "drmsim/drm_engine.hpp"
#include "drmsim/loadgen.hpp"

#include <optional>
#include <string>
#include <vector>

namespace drmsim {

class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A scenario matrix: one community evaluated under every (plan, K) pair.
struct ScenarioConfig {
    std::optional<CommunitySpec> community;   // generate fresh
    std::optional<std::string> community_file;  // or load a snapshot
    std::vector<DrmPlan> plans;
    std::vector<int> state_counts;
    OrderSpec order;
    std::string output_dir = ".";

    void validate(const SimClock& clock) const;
};

struct ResultRow {
    double setpoint_f = 0.0;
    double max_deviation_f = 0.0;
    double max_denied_hours = 0.0;
    int k_states = 0;
    double baseline_peak_kw = 0.0;
    double final_peak_kw = 0.0;
    double reduction_pct = 0.0;
    int homes_saturated = 0;
};

struct ScenarioResult {
    std::vector<ResultRow> rows;          // plan-major, state_counts order
    std::vector<DrmOutcome> outcomes;     // parallel to rows
    Community community;                  // the shared community (K as generated)
};

ScenarioConfig parse_scenario_config(const std::string& json_text);
ScenarioConfig load_scenario_config(const std::string& path);

/// Community spec from a bare JSON object; absent fields keep defaults.
CommunitySpec parse_community_spec(const std::string& json_text);

/// Runs the full matrix against one shared community and baseline.
ScenarioResult run_scenarios(const ScenarioConfig& config);

enum class ReportFormat { kCsv, kJson };

std::string format_report(const std::vector<ResultRow>& rows, ReportFormat format);
void emit_report(const std::vector<ResultRow>& rows, ReportFormat format, const std::string& path);
std::vector<ResultRow> parse_report_csv(const std::string& csv_text);

/// Plot-ready per-slot CSV: slot_index,time_of_day,baseline_kw,drm_kw.
std::string format_profiles(const DrmOutcome& outcome, const SimClock& clock);
void emit_profiles(const DrmOutcome& outcome, const SimClock& clock, const std::string& path);

// Outcome snapshot for offline re-auditing.
std::string outcome_to_json(const DrmOutcome& outcome, const DrmPlan& plan, int k_states);
void save_outcome(const DrmOutcome& outcome, const DrmPlan& plan, int k_states,
                  const std::string& path);
struct SavedOutcome {
    DrmOutcome outcome;
    DrmPlan plan;
    int k_states = 0;
};
SavedOutcome load_outcome(const std::string& path);

}  // namespace drmsim
