// ndlab: runs neighbor discovery scenarios and writes JSON/CSV reports.

#include <CLI11.hpp>

#include <charconv>
#include <iostream>
#include <string>
#include <vector>

#include "ndsec/experiment.hpp"
#include "ndsec/report.hpp"

namespace {

// "<node>=<ticks>"
bool parse_latency(const std::string& arg, std::string& name, ndsec::Tick& ticks)
{
    auto eq = arg.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == arg.size()) return false;
    name = arg.substr(0, eq);
    const char* first = arg.data() + eq + 1;
    const char* last = arg.data() + arg.size();
    auto [ptr, ec] = std::from_chars(first, last, ticks);
    return ec == std::errc{} && ptr == last;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Hashed-target neighbor discovery lab"};

    std::string scenario = "baseline_resolution";
    std::string strategy;
    std::string format = "json";
    std::string kex = "eager";
    std::vector<std::string> latencies;
    ndsec::ScenarioConfig cfg;

    app.add_option("--scenario", scenario, "baseline_resolution | proposal_resolution | baseline_attack | "
                                           "proposal_attack_guess | proposal_attack_reflect | overhead_compare")
        ->capture_default_str();
    app.add_option("--nodes", cfg.node_count, "Node count, intruder included in attack scenarios")
        ->capture_default_str();
    app.add_option("--reps", cfg.repetitions, "Repetitions")->capture_default_str();
    app.add_option("--seed", cfg.seed, "Base seed; repetition i uses seed + i")->capture_default_str();
    app.add_option("--attacker-strategy", strategy, "sniff_plaintext | guess_pool | reflect_hash");
    app.add_option("--burst", cfg.burst_size, "Forged NAs per observed NS (per candidate)")->capture_default_str();
    app.add_option("--pool-size", cfg.pool_size, "Candidate addresses for guess_pool")->capture_default_str();
    app.add_flag("--pool-include-target", cfg.pool_includes_target, "Put the true target into the guess pool");
    app.add_option("--latency", latencies, "Per-node latency, <node>=<ticks> (alice, bob, ..., intruder)");
    app.add_option("--honest-latency", cfg.honest_latency, "Default latency of honest nodes")->capture_default_str();
    app.add_option("--attacker-latency", cfg.attacker_latency, "Default intruder latency")->capture_default_str();
    app.add_option("--group", cfg.group, "DH group: modp2048 | test")->capture_default_str();
    app.add_option("--kex", kex, "Key exchange policy: eager | on_demand")->capture_default_str();
    app.add_option("--timeout", cfg.resolution_timeout, "Resolution timeout in ticks")->capture_default_str();
    app.add_option("--frame-overhead", cfg.frame_overhead, "Link + IPv6 header bytes added per frame")
        ->capture_default_str();
    app.add_option("--threads", cfg.threads, "Worker threads (0 = all cores)")->capture_default_str();
    app.add_option("--out", cfg.output_path, "Report path (stdout when omitted)");
    app.add_option("--format", format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
    app.add_option("--trace", cfg.trace_path, "Event trace CSV of repetition 0");

    CLI11_PARSE(app, argc, argv);

    std::vector<std::string> bad;
    if (auto s = ndsec::parse_scenario(scenario)) cfg.scenario = *s;
    else bad.push_back("scenario: unknown value '" + scenario + "'");
    if (!strategy.empty()) {
        if (auto s = ndsec::parse_strategy(strategy)) cfg.attacker_strategy = *s;
        else bad.push_back("attacker_strategy: unknown value '" + strategy + "'");
    }
    if (kex == "eager") cfg.kex = ndsec::KexPolicy::eager;
    else if (kex == "on_demand") cfg.kex = ndsec::KexPolicy::on_demand;
    else bad.push_back("kex: must be eager or on_demand");
    for (const auto& l : latencies) {
        std::string name;
        ndsec::Tick ticks = 0;
        if (parse_latency(l, name, ticks)) cfg.latencies[name] = ticks;
        else bad.push_back("latency: expected <node>=<ticks>, got '" + l + "'");
    }
    cfg.format = format == "csv" ? ndsec::ReportFormat::csv : ndsec::ReportFormat::json;

    try {
        if (!bad.empty()) throw ndsec::ConfigError(bad);
        const ndsec::ExperimentReport report = ndsec::run_scenario(cfg);
        if (cfg.output_path.empty()) {
            std::cout << (cfg.format == ndsec::ReportFormat::json ? ndsec::report_to_json_string(report)
                                                                  : ndsec::report_to_csv_string(report));
        } else {
            ndsec::emit_report(report, cfg.format, cfg.output_path);
        }
    } catch (const ndsec::ConfigError& e) {
        std::cerr << "ndlab: invalid configuration\n";
        for (const auto& d : e.diagnostics()) std::cerr << "  " << d << '\n';
        return 2;
    } catch (const ndsec::Error& e) {
        std::cerr << "ndlab: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
