#include "drmsim/desk_instances.hpp"
#include "drmsim/drm_engine.hpp"
#include "drmsim/loadgen.hpp"
#include "drmsim/oracle.hpp"
#include "drmsim/scenario.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitIo = 2;

std::string cell_tag(int plan_index, int k) {
    return "p" + std::to_string(plan_index) + "_k" + std::to_string(k);
}

int cmd_generate(const std::string& config_path, std::optional<std::uint64_t> seed,
                 const std::string& out_path) {
    drmsim::CommunitySpec spec;
    if (!config_path.empty()) {
        std::ifstream in(config_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open config: " + config_path);
        std::ostringstream buf;
        buf << in.rdbuf();
        spec = drmsim::parse_community_spec(buf.str());
    }
    if (seed) spec.seed = *seed;
    const drmsim::Community community = drmsim::generate_community(spec);
    drmsim::save_community(community, out_path);
    const auto [pk, slot] = drmsim::peak(drmsim::baseline_load(community));
    std::printf("generated %d homes, baseline peak %.1f kW at slot %d -> %s\n",
                static_cast<int>(community.homes.size()), pk, slot, out_path.c_str());
    return kExitOk;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed,
            const std::string& out_dir, const std::string& format) {
    drmsim::ScenarioConfig config = drmsim::load_scenario_config(config_path);
    if (seed) config.order.seed = *seed;
    if (!out_dir.empty()) config.output_dir = out_dir;
    std::filesystem::create_directories(config.output_dir);

    const drmsim::ScenarioResult result = drmsim::run_scenarios(config);
    const drmsim::ReportFormat fmt =
        format == "json" ? drmsim::ReportFormat::kJson : drmsim::ReportFormat::kCsv;
    const std::string report_path =
        config.output_dir + "/report." + (fmt == drmsim::ReportFormat::kJson ? "json" : "csv");
    drmsim::emit_report(result.rows, fmt, report_path);

    const int num_k = static_cast<int>(config.state_counts.size());
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const std::string tag = cell_tag(static_cast<int>(i) / num_k, result.rows[i].k_states);
        drmsim::emit_profiles(result.outcomes[i], result.community.clock,
                              config.output_dir + "/profile_" + tag + ".csv");
        drmsim::save_outcome(result.outcomes[i],
                             config.plans[i / config.state_counts.size()], result.rows[i].k_states,
                             config.output_dir + "/outcome_" + tag + ".json");
    }
    if (!config.community_file)
        drmsim::save_community(result.community, config.output_dir + "/community.json");

    std::printf("%s", drmsim::format_report(result.rows, drmsim::ReportFormat::kCsv).c_str());
    std::printf("report -> %s\n", report_path.c_str());
    return kExitOk;
}

int cmd_oracle(std::uint64_t seed, int instances, const std::string& out_path) {
    std::string csv = "seed,homes,k_states,greedy_peak_kw,oracle_peak_kw,gap_kw\n";
    double worst_gap = 0.0;
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t instance_seed = seed + static_cast<std::uint64_t>(i);
        const int num_homes = 2 + static_cast<int>(instance_seed % 2);
        const int num_states = 2 + static_cast<int>((instance_seed / 2) % 2);
        const auto [community, plan] = drmsim::random_desk_instance(instance_seed, num_homes,
                                                                    num_states);
        const drmsim::GreedyComparison cmp = drmsim::compare_greedy(community, plan);
        worst_gap = std::max(worst_gap, cmp.gap_kw);
        char line[160];
        std::snprintf(line, sizeof(line), "%llu,%d,%d,%.6f,%.6f,%.6f\n",
                      static_cast<unsigned long long>(instance_seed), num_homes, num_states,
                      cmp.greedy_peak_kw, cmp.oracle_peak_kw, cmp.gap_kw);
        csv += line;
    }
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot open: " + out_path);
        out << csv;
    } else {
        std::printf("%s", csv.c_str());
    }
    std::printf("%d instances, worst greedy-vs-oracle gap %.6f kW\n", instances, worst_gap);
    return kExitOk;
}

int cmd_audit(const std::string& community_path, const std::string& outcome_path) {
    const drmsim::Community community = drmsim::load_community(community_path);
    const drmsim::SavedOutcome saved = drmsim::load_outcome(outcome_path);
    const drmsim::Community cell = drmsim::with_state_count(community, saved.k_states);
    const std::vector<drmsim::Violation> violations =
        drmsim::audit_constraints(cell, saved.plan, saved.outcome);
    if (violations.empty()) {
        std::printf("audit clean: %d homes, 0 violations\n",
                    static_cast<int>(community.homes.size()));
        return kExitOk;
    }
    for (const drmsim::Violation& v : violations) {
        const char* kind = v.kind == drmsim::Violation::Kind::kSeverity    ? "severity"
                           : v.kind == drmsim::Violation::Kind::kDuration ? "duration"
                                                                          : "schedule";
        std::fprintf(stderr, "violation [%s] home %d slot %d: %s\n", kind, v.home, v.slot,
                     v.detail.c_str());
    }
    return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Peak-load reduction simulator for K-state throttlable air conditioners"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_path;
    std::string format = "csv";
    std::optional<std::uint64_t> seed;
    std::uint64_t oracle_seed = 1;
    int oracle_instances = 100;
    std::string community_path;
    std::string outcome_path;

    CLI::App* generate = app.add_subcommand("generate", "Generate a community snapshot");
    generate->add_option("--config", config_path, "community spec JSON (defaults used if omitted)");
    generate->add_option("--seed", seed, "override the generator seed");
    generate->add_option("--out", out_path, "output community JSON path")->required();

    CLI::App* run = app.add_subcommand("run", "Run a scenario matrix");
    run->add_option("--config", config_path, "scenario config JSON")->required();
    run->add_option("--seed", seed, "override the home-order seed");
    run->add_option("--out", out_path, "output directory (overrides config)");
    run->add_option("--format", format, "report format: csv | json")
        ->check(CLI::IsMember({"csv", "json"}));

    CLI::App* oracle = app.add_subcommand("oracle", "Greedy vs exhaustive on desk instances");
    oracle->add_option("--seed", oracle_seed, "base seed");
    oracle->add_option("--instances", oracle_instances, "number of instances");
    oracle->add_option("--out", out_path, "write the gap table to this CSV");

    CLI::App* audit = app.add_subcommand("audit", "Re-verify a saved outcome");
    audit->add_option("--community", community_path, "community snapshot JSON")->required();
    audit->add_option("--outcome", outcome_path, "saved outcome JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // --help and --version exit 0
        return code == 0 ? kExitOk : kExitValidation;
    }

    try {
        if (generate->parsed()) return cmd_generate(config_path, seed, out_path);
        if (run->parsed()) return cmd_run(config_path, seed, out_path, format);
        if (oracle->parsed()) return cmd_oracle(oracle_seed, oracle_instances, out_path);
        if (audit->parsed()) return cmd_audit(community_path, outcome_path);
    } catch (const drmsim::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kExitValidation;
    } catch (const drmsim::GenerationError& e) {
        std::fprintf(stderr, "generation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::domain_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "i/o error: %s\n", e.what());
        return kExitIo;
    }
    return kExitValidation;
}
