#pragma once
#ifndef NDSEC_REPORT_HPP
#define NDSEC_REPORT_HPP

// Experiment configuration and report types with their JSON / CSV forms.
// Field order in both encodings is fixed; see docs/report-format.md.

#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "ndsec/adversary.hpp"
#include "ndsec/error.hpp"
#include "ndsec/netsim.hpp"
#include "ndsec/node_engine.hpp"

namespace ndsec {

enum class Scenario {
    baseline_resolution,
    proposal_resolution,
    baseline_attack,
    proposal_attack_guess,
    proposal_attack_reflect,
    overhead_compare,
};

inline const char* to_string(Scenario s)
{
    switch (s) {
    case Scenario::baseline_resolution: return "baseline_resolution";
    case Scenario::proposal_resolution: return "proposal_resolution";
    case Scenario::baseline_attack: return "baseline_attack";
    case Scenario::proposal_attack_guess: return "proposal_attack_guess";
    case Scenario::proposal_attack_reflect: return "proposal_attack_reflect";
    case Scenario::overhead_compare: return "overhead_compare";
    }
    return "unknown";
}

inline std::optional<Scenario> parse_scenario(std::string_view s)
{
    for (auto v : {Scenario::baseline_resolution, Scenario::proposal_resolution, Scenario::baseline_attack,
                   Scenario::proposal_attack_guess, Scenario::proposal_attack_reflect, Scenario::overhead_compare})
        if (s == to_string(v)) return v;
    return std::nullopt;
}

inline bool is_attack(Scenario s)
{
    return s == Scenario::baseline_attack || s == Scenario::proposal_attack_guess ||
           s == Scenario::proposal_attack_reflect;
}

enum class ReportFormat { json, csv };
enum class KexPolicy { eager, on_demand };

inline const char* to_string(KexPolicy k) { return k == KexPolicy::eager ? "eager" : "on_demand"; }

struct ScenarioConfig {
    Scenario scenario = Scenario::baseline_resolution;
    std::size_t node_count = 3;  // includes the intruder in attack scenarios
    std::size_t repetitions = 30;
    std::uint64_t seed = 1;
    std::map<std::string, Tick> latencies;  // by node name; unlisted nodes use the defaults
    Tick honest_latency = 5;
    Tick attacker_latency = default_attacker_latency;
    std::optional<AttackStrategy> attacker_strategy;  // defaults per scenario
    std::size_t burst_size = default_burst_size;
    std::size_t pool_size = 8;
    bool pool_includes_target = false;
    std::string group = "modp2048";
    KexPolicy kex = KexPolicy::eager;
    Tick resolution_timeout = default_resolution_timeout;
    std::size_t frame_overhead = default_frame_overhead;

    // Output and execution; not echoed into reports.
    std::string output_path;
    ReportFormat format = ReportFormat::json;
    std::string trace_path;
    unsigned threads = 0;  // 0: hardware concurrency

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

struct ResolutionResult {
    Ipv6Address target;
    bool resolved = false;
    std::optional<MacAddress> mac;
    std::optional<Tick> ticks;

    friend bool operator==(const ResolutionResult&, const ResolutionResult&) = default;
};

/// One simulation: a repetition holds one run, or two for overhead_compare.
struct RunRecord {
    std::string label;  // "baseline" or "proposal"
    TargetMode mode = TargetMode::standard;
    TrafficCounters counters;
    std::uint64_t key_exchanges = 0;
    ResolutionResult resolution;
    std::optional<AttackOutcome> attack;
    std::uint64_t forged_accepted = 0;
    std::uint64_t hashed_ns_checked = 0;
    std::uint64_t hashed_ns_violations = 0;
    std::uint64_t nonresponse_violations = 0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

struct RepetitionRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    std::vector<RunRecord> runs;

    friend bool operator==(const RepetitionRecord&, const RepetitionRecord&) = default;
};

struct NodeMeans {
    std::string name;
    double frames_out = 0;
    double frames_in = 0;
    double bytes_out = 0;
    double bytes_in = 0;

    friend bool operator==(const NodeMeans&, const NodeMeans&) = default;
};

struct RunAggregate {
    std::string label;
    std::vector<NodeMeans> nodes;
    double total_frames = 0;
    double total_bytes = 0;
    double key_exchanges = 0;
    double resolution_rate = 0;
    std::optional<double> attack_success_rate;
    double forged_accepted = 0;

    friend bool operator==(const RunAggregate&, const RunAggregate&) = default;
};

struct ExperimentReport {
    std::string scenario;
    bool out_of_model = false;
    std::string note;
    ScenarioConfig config;  // output/execution fields cleared
    std::vector<RepetitionRecord> repetitions;
    std::vector<RunAggregate> aggregate;
    std::map<std::string, double> ratios;  // proposal / baseline, overhead_compare only

    friend bool operator==(const ExperimentReport&, const ExperimentReport&) = default;
};

// ---------------------------------------------------------------------------
// JSON

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

namespace detail {

template <typename T>
ordered_json opt(const std::optional<T>& v)
{
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

inline ordered_json opt_mac(const std::optional<MacAddress>& m)
{
    return m ? ordered_json(m->to_string()) : ordered_json(nullptr);
}

inline std::optional<MacAddress> read_opt_mac(const ordered_json& j)
{
    if (j.is_null()) return std::nullopt;
    return MacAddress::from_string(j.get<std::string>());
}

}  // namespace detail

inline ordered_json to_json(const ScenarioConfig& c)
{
    ordered_json lat = ordered_json::object();
    for (const auto& [k, v] : c.latencies) lat[k] = v;
    return ordered_json{
        {"scenario", to_string(c.scenario)},
        {"node_count", c.node_count},
        {"repetitions", c.repetitions},
        {"seed", c.seed},
        {"latencies", lat},
        {"honest_latency", c.honest_latency},
        {"attacker_latency", c.attacker_latency},
        {"attacker_strategy", c.attacker_strategy ? ordered_json(to_string(*c.attacker_strategy))
                                                  : ordered_json(nullptr)},
        {"burst_size", c.burst_size},
        {"pool_size", c.pool_size},
        {"pool_includes_target", c.pool_includes_target},
        {"group", c.group},
        {"kex", to_string(c.kex)},
        {"resolution_timeout", c.resolution_timeout},
        {"frame_overhead", c.frame_overhead},
    };
}

inline ScenarioConfig config_from_json(const ordered_json& j)
{
    ScenarioConfig c;
    auto sc = parse_scenario(j.at("scenario").get<std::string>());
    if (!sc) throw ConfigError({"scenario: unknown value"});
    c.scenario = *sc;
    c.node_count = j.at("node_count").get<std::size_t>();
    c.repetitions = j.at("repetitions").get<std::size_t>();
    c.seed = j.at("seed").get<std::uint64_t>();
    for (const auto& [k, v] : j.at("latencies").items()) c.latencies[k] = v.get<Tick>();
    c.honest_latency = j.at("honest_latency").get<Tick>();
    c.attacker_latency = j.at("attacker_latency").get<Tick>();
    if (!j.at("attacker_strategy").is_null())
        c.attacker_strategy = parse_strategy(j.at("attacker_strategy").get<std::string>());
    c.burst_size = j.at("burst_size").get<std::size_t>();
    c.pool_size = j.at("pool_size").get<std::size_t>();
    c.pool_includes_target = j.at("pool_includes_target").get<bool>();
    c.group = j.at("group").get<std::string>();
    c.kex = j.at("kex").get<std::string>() == "eager" ? KexPolicy::eager : KexPolicy::on_demand;
    c.resolution_timeout = j.at("resolution_timeout").get<Tick>();
    c.frame_overhead = j.at("frame_overhead").get<std::size_t>();
    return c;
}

inline ordered_json to_json(const TrafficCounters& t)
{
    ordered_json nodes = ordered_json::array();
    for (const auto& n : t.nodes)
        nodes.push_back({{"name", n.name},
                         {"frames_out", n.frames_out},
                         {"frames_in", n.frames_in},
                         {"bytes_out", n.bytes_out},
                         {"bytes_in", n.bytes_in}});
    ordered_json by_type = ordered_json::object();
    for (const auto& [k, v] : t.frames_by_type) by_type[k] = v;
    return ordered_json{{"nodes", nodes},
                        {"frames_by_type", by_type},
                        {"total_frames", t.total_frames},
                        {"total_bytes", t.total_bytes},
                        {"deliveries", t.deliveries},
                        {"malformed_dropped", t.malformed_dropped}};
}

inline TrafficCounters counters_from_json(const ordered_json& j)
{
    TrafficCounters t;
    for (const auto& n : j.at("nodes"))
        t.nodes.push_back(NodeCounters{n.at("name").get<std::string>(), n.at("frames_out").get<std::uint64_t>(),
                                       n.at("frames_in").get<std::uint64_t>(), n.at("bytes_out").get<std::uint64_t>(),
                                       n.at("bytes_in").get<std::uint64_t>()});
    for (const auto& [k, v] : j.at("frames_by_type").items()) t.frames_by_type[k] = v.get<std::uint64_t>();
    t.total_frames = j.at("total_frames").get<std::uint64_t>();
    t.total_bytes = j.at("total_bytes").get<std::uint64_t>();
    t.deliveries = j.at("deliveries").get<std::uint64_t>();
    t.malformed_dropped = j.at("malformed_dropped").get<std::uint64_t>();
    return t;
}

inline ordered_json to_json(const RunRecord& r)
{
    ordered_json attack = nullptr;
    if (r.attack)
        attack = ordered_json{{"succeeded", r.attack->succeeded},
                              {"victim_cached_mac", detail::opt_mac(r.attack->victim_cached_mac)},
                              {"forged_frames_sent", r.attack->forged_frames_sent}};
    return ordered_json{
        {"label", r.label},
        {"mode", to_string(r.mode)},
        {"counters", to_json(r.counters)},
        {"key_exchanges", r.key_exchanges},
        {"resolution",
         {{"target", r.resolution.target.to_string()},
          {"resolved", r.resolution.resolved},
          {"mac", detail::opt_mac(r.resolution.mac)},
          {"ticks", detail::opt(r.resolution.ticks)}}},
        {"attack", attack},
        {"forged_accepted", r.forged_accepted},
        {"hashed_ns_checked", r.hashed_ns_checked},
        {"hashed_ns_violations", r.hashed_ns_violations},
        {"nonresponse_violations", r.nonresponse_violations},
    };
}

inline RunRecord run_from_json(const ordered_json& j)
{
    RunRecord r;
    r.label = j.at("label").get<std::string>();
    r.mode = j.at("mode").get<std::string>() == "hashed" ? TargetMode::hashed : TargetMode::standard;
    r.counters = counters_from_json(j.at("counters"));
    r.key_exchanges = j.at("key_exchanges").get<std::uint64_t>();
    const auto& res = j.at("resolution");
    r.resolution.target = Ipv6Address::from_string(res.at("target").get<std::string>());
    r.resolution.resolved = res.at("resolved").get<bool>();
    r.resolution.mac = detail::read_opt_mac(res.at("mac"));
    if (!res.at("ticks").is_null()) r.resolution.ticks = res.at("ticks").get<Tick>();
    if (const auto& a = j.at("attack"); !a.is_null())
        r.attack = AttackOutcome{a.at("succeeded").get<bool>(), detail::read_opt_mac(a.at("victim_cached_mac")),
                                 a.at("forged_frames_sent").get<std::uint64_t>()};
    r.forged_accepted = j.at("forged_accepted").get<std::uint64_t>();
    r.hashed_ns_checked = j.at("hashed_ns_checked").get<std::uint64_t>();
    r.hashed_ns_violations = j.at("hashed_ns_violations").get<std::uint64_t>();
    r.nonresponse_violations = j.at("nonresponse_violations").get<std::uint64_t>();
    return r;
}

inline ordered_json to_json(const RunAggregate& a)
{
    ordered_json nodes = ordered_json::array();
    for (const auto& n : a.nodes)
        nodes.push_back({{"name", n.name},
                         {"mean_frames_out", n.frames_out},
                         {"mean_frames_in", n.frames_in},
                         {"mean_bytes_out", n.bytes_out},
                         {"mean_bytes_in", n.bytes_in}});
    return ordered_json{{"label", a.label},
                        {"nodes", nodes},
                        {"mean_total_frames", a.total_frames},
                        {"mean_total_bytes", a.total_bytes},
                        {"mean_key_exchanges", a.key_exchanges},
                        {"resolution_rate", a.resolution_rate},
                        {"attack_success_rate", detail::opt(a.attack_success_rate)},
                        {"mean_forged_accepted", a.forged_accepted}};
}

inline RunAggregate aggregate_from_json(const ordered_json& j)
{
    RunAggregate a;
    a.label = j.at("label").get<std::string>();
    for (const auto& n : j.at("nodes"))
        a.nodes.push_back(NodeMeans{n.at("name").get<std::string>(), n.at("mean_frames_out").get<double>(),
                                    n.at("mean_frames_in").get<double>(), n.at("mean_bytes_out").get<double>(),
                                    n.at("mean_bytes_in").get<double>()});
    a.total_frames = j.at("mean_total_frames").get<double>();
    a.total_bytes = j.at("mean_total_bytes").get<double>();
    a.key_exchanges = j.at("mean_key_exchanges").get<double>();
    a.resolution_rate = j.at("resolution_rate").get<double>();
    if (!j.at("attack_success_rate").is_null()) a.attack_success_rate = j.at("attack_success_rate").get<double>();
    a.forged_accepted = j.at("mean_forged_accepted").get<double>();
    return a;
}

inline ordered_json to_json(const ExperimentReport& r)
{
    ordered_json reps = ordered_json::array();
    for (const auto& rep : r.repetitions) {
        ordered_json runs = ordered_json::array();
        for (const auto& run : rep.runs) runs.push_back(to_json(run));
        reps.push_back({{"index", rep.index}, {"seed", rep.seed}, {"runs", runs}});
    }
    ordered_json agg = ordered_json::array();
    for (const auto& a : r.aggregate) agg.push_back(to_json(a));
    ordered_json ratios = ordered_json::object();
    for (const auto& [k, v] : r.ratios) ratios[k] = v;
    return ordered_json{{"scenario", r.scenario},   {"out_of_model", r.out_of_model},
                        {"note", r.note},           {"config", to_json(r.config)},
                        {"repetitions", reps},      {"aggregate", agg},
                        {"ratios", ratios}};
}

inline ExperimentReport report_from_json(const ordered_json& j)
{
    ExperimentReport r;
    r.scenario = j.at("scenario").get<std::string>();
    r.out_of_model = j.at("out_of_model").get<bool>();
    r.note = j.at("note").get<std::string>();
    r.config = config_from_json(j.at("config"));
    for (const auto& rep : j.at("repetitions")) {
        RepetitionRecord rr{rep.at("index").get<std::size_t>(), rep.at("seed").get<std::uint64_t>(), {}};
        for (const auto& run : rep.at("runs")) rr.runs.push_back(run_from_json(run));
        r.repetitions.push_back(std::move(rr));
    }
    for (const auto& a : j.at("aggregate")) r.aggregate.push_back(aggregate_from_json(a));
    for (const auto& [k, v] : j.at("ratios").items()) r.ratios[k] = v.get<double>();
    return r;
}

inline std::string report_to_json_string(const ExperimentReport& r) { return to_json(r).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSV: one row per (repetition, run) plus one aggregate row per run label.
// Per-node columns describe the first node (the resolving host).

inline constexpr std::string_view csv_header =
    "row_type,rep,seed,run,mode,alice_frames_out,alice_frames_in,alice_bytes_out,alice_bytes_in,"
    "total_frames,total_bytes,key_exchanges,resolved,attack_succeeded,forged_frames_sent,forged_accepted";

namespace detail {

inline std::string num(double v)
{
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

}  // namespace detail

inline std::string report_to_csv_string(const ExperimentReport& r)
{
    std::ostringstream os;
    os << csv_header << '\n';
    for (const auto& rep : r.repetitions) {
        for (const auto& run : rep.runs) {
            const auto& a = run.counters.nodes.front();
            os << "rep," << rep.index << ',' << rep.seed << ',' << run.label << ',' << to_string(run.mode) << ','
               << a.frames_out << ',' << a.frames_in << ',' << a.bytes_out << ',' << a.bytes_in << ','
               << run.counters.total_frames << ',' << run.counters.total_bytes << ',' << run.key_exchanges << ','
               << (run.resolution.resolved ? 1 : 0) << ',';
            if (run.attack) os << (run.attack->succeeded ? 1 : 0) << ',' << run.attack->forged_frames_sent;
            else os << ',';
            os << ',' << run.forged_accepted << '\n';
        }
    }
    for (const auto& agg : r.aggregate) {
        const auto& a = agg.nodes.front();
        double forged_sent = 0;
        std::size_t n = 0;
        TargetMode mode = TargetMode::standard;
        for (const auto& rep : r.repetitions)
            for (const auto& run : rep.runs)
                if (run.label == agg.label) {
                    mode = run.mode;
                    if (run.attack) forged_sent += static_cast<double>(run.attack->forged_frames_sent);
                    ++n;
                }
        using detail::num;
        os << "aggregate,,," << agg.label << ',' << to_string(mode) << ',' << num(a.frames_out) << ','
           << num(a.frames_in) << ',' << num(a.bytes_out) << ',' << num(a.bytes_in) << ',' << num(agg.total_frames)
           << ',' << num(agg.total_bytes) << ',' << num(agg.key_exchanges) << ',' << num(agg.resolution_rate) << ',';
        if (agg.attack_success_rate)
            os << num(*agg.attack_success_rate) << ',' << num(n ? forged_sent / static_cast<double>(n) : 0.0);
        else os << ',';
        os << ',' << num(agg.forged_accepted) << '\n';
    }
    return os.str();
}

inline void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open report file for writing: " + path);
    out << (format == ReportFormat::json ? report_to_json_string(report) : report_to_csv_string(report));
    out.flush();
    if (!out) throw IoError("failed writing report file: " + path);
}

inline ExperimentReport read_json_report(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open report file: " + path);
    return report_from_json(ordered_json::parse(in));
}

}  // namespace ndsec

#endif  // NDSEC_REPORT_HPP
