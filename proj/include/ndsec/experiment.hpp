#pragma once
#ifndef NDSEC_EXPERIMENT_HPP
#define NDSEC_EXPERIMENT_HPP

// Scenario runner. Each repetition builds a fresh simulator from
// (config, seed + index) and is independent, so repetitions run in parallel.
// Reports are assembled in repetition order and stay byte-identical across runs.

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "ndsec/adversary.hpp"
#include "ndsec/dh_keyex.hpp"
#include "ndsec/error.hpp"
#include "ndsec/hashed_target.hpp"
#include "ndsec/netsim.hpp"
#include "ndsec/node_engine.hpp"
#include "ndsec/report.hpp"

namespace ndsec {

inline constexpr std::string_view reflect_note =
    "out-of-model: the intruder replays the observed hashed Target; the evaluated attacker only sniffs or "
    "guesses plaintext targets";

/// alice, bob, carol, ... then node<i>.
inline std::string honest_node_name(std::size_t i)
{
    static const char* names[] = {"alice", "bob", "carol", "dave", "erin", "frank", "grace", "heidi"};
    return i < std::size(names) ? names[i] : "node" + std::to_string(i);
}

inline constexpr const char* intruder_name = "intruder";

inline Ipv6Address honest_node_ip(std::size_t i) { return Ipv6Address::link_local(i + 1); }

inline MacAddress honest_node_mac(std::size_t i)
{
    const std::size_t n = i + 1;
    return MacAddress{{0x02, 0x00, 0x00, 0x00, static_cast<std::uint8_t>(n >> 8), static_cast<std::uint8_t>(n)}};
}

inline std::size_t honest_count(const ScenarioConfig& c)
{
    return is_attack(c.scenario) ? c.node_count - 1 : c.node_count;
}

inline AttackStrategy effective_strategy(const ScenarioConfig& c)
{
    if (c.attacker_strategy) return *c.attacker_strategy;
    switch (c.scenario) {
    case Scenario::proposal_attack_guess: return AttackStrategy::guess_pool;
    case Scenario::proposal_attack_reflect: return AttackStrategy::reflect_hash;
    default: return AttackStrategy::sniff_plaintext;
    }
}

/// Throws ConfigError listing every invalid field.
inline void validate(const ScenarioConfig& c)
{
    std::vector<std::string> bad;
    if (c.repetitions < 1) bad.emplace_back("repetitions: must be >= 1");
    if (c.node_count < 2) bad.emplace_back("node_count: must be >= 2");
    if (is_attack(c.scenario) && c.node_count < 3)
        bad.emplace_back("node_count: attack scenarios need >= 3 (alice, bob, intruder)");
    if (c.node_count > 0xffff) bad.emplace_back("node_count: must be <= 65535");
    if (c.burst_size < 1) bad.emplace_back("burst_size: must be >= 1");
    if (c.resolution_timeout < 1) bad.emplace_back("resolution_timeout: must be >= 1");
    if (c.group != "modp2048" && c.group != "test") bad.emplace_back("group: must be modp2048 or test");
    if (c.attacker_strategy && !is_attack(c.scenario))
        bad.emplace_back("attacker_strategy: only valid for attack scenarios");
    if (is_attack(c.scenario) && effective_strategy(c) == AttackStrategy::guess_pool && c.pool_size < 1)
        bad.emplace_back("pool_size: guess_pool needs at least one candidate");

    std::set<std::string> names;
    if (c.node_count >= 2 && c.node_count <= 0xffff) {
        for (std::size_t i = 0; i < honest_count(c); ++i) names.insert(honest_node_name(i));
        if (is_attack(c.scenario)) names.insert(intruder_name);
    }
    for (const auto& [name, ticks] : c.latencies)
        if (!names.contains(name)) bad.emplace_back("latency: no node named '" + name + "'");

    if (!bad.empty()) throw ConfigError(std::move(bad));
}

/// Candidate addresses for guess_pool, excluding the true target unless asked to include it.
inline std::vector<Ipv6Address> make_guess_pool(std::size_t size, const Ipv6Address& true_target, bool include_target,
                                                std::uint64_t seed)
{
    std::mt19937_64 rng(Node::splitmix(seed ^ 0x706f6f6cULL));
    std::vector<Ipv6Address> pool;
    while (pool.size() < size) {
        Ipv6Address a = Ipv6Address::link_local(rng());
        if (a == true_target || std::find(pool.begin(), pool.end(), a) != pool.end()) continue;
        pool.push_back(a);
    }
    if (include_target && !pool.empty()) pool[rng() % pool.size()] = true_target;
    return pool;
}

struct RunOutput {
    RunRecord record;
    std::string trace_csv;
};

/// One simulation of the resolving host (alice) resolving bob.
inline RunOutput simulate_run(const ScenarioConfig& cfg, TargetMode mode, std::string label, std::uint64_t rep_seed,
                              bool with_attacker, bool want_trace)
{
    const DhGroup group = DhGroup::by_name(cfg.group);
    Simulator sim(cfg.frame_overhead);
    const std::size_t honest = honest_count(cfg);

    auto latency_of = [&cfg](const std::string& name, Tick fallback) {
        auto it = cfg.latencies.find(name);
        return it == cfg.latencies.end() ? fallback : it->second;
    };

    std::vector<NodeHandle> nodes;
    for (std::size_t i = 0; i < honest; ++i) {
        NodeConfig nc;
        nc.name = honest_node_name(i);
        nc.ip = honest_node_ip(i);
        nc.mac = honest_node_mac(i);
        nc.mode = mode;
        nc.group = group;
        nc.dh_seed = Node::splitmix(rep_seed * 0x100000001b3ULL + i);
        nc.resolution_timeout = cfg.resolution_timeout;
        const std::string name = nc.name;
        nodes.push_back(sim.emplace<Node>(latency_of(name, cfg.honest_latency), name, std::move(nc)));
    }

    const Ipv6Address target = honest_node_ip(1);
    std::optional<NodeHandle> intruder;
    if (with_attacker) {
        AttackerConfig ac;
        ac.strategy = effective_strategy(cfg);
        ac.burst_size = cfg.burst_size;
        ac.latency = latency_of(intruder_name, cfg.attacker_latency);
        if (ac.strategy == AttackStrategy::guess_pool)
            ac.guess_pool = make_guess_pool(cfg.pool_size, target, cfg.pool_includes_target, rep_seed);
        const Tick lat = ac.latency;
        intruder = sim.emplace<Adversary>(lat, intruder_name, std::move(ac));
    }

    auto node = [&sim, &nodes](std::size_t i) -> Node& { return sim.get<Node>(nodes[i]); };

    RunRecord rec;
    rec.label = std::move(label);
    rec.mode = mode;

    // Every hashed NS on the wire must carry hash_target(key, target), never the plaintext.
    sim.on_send([&](NodeHandle sender, const SimFrame& frame, const NdpMessage& msg) {
        const auto* ns = std::get_if<NeighborSolicitation>(&msg);
        if (!ns || ns->mode != TargetMode::hashed || (intruder && sender == *intruder)) return;
        ++rec.hashed_ns_checked;
        const Node& n = sim.get<Node>(sender);
        const Ipv6Address resolving = n.emitted_ns().back().target_ip;
        Bytes16 wire{};
        std::copy_n(frame.payload.begin() + icmp6::target_offset, 16, wire.begin());
        auto key = n.key_table().find(resolving);
        const bool ok = key != n.key_table().end() &&
                        wire == hash_target(key->second.key_bytes, resolving).bytes && wire != resolving.bytes;
        if (!ok) ++rec.hashed_ns_violations;
    });

    if (mode == TargetMode::hashed) {
        for (std::size_t i = 0; i < honest; ++i) {
            for (std::size_t j = i + 1; j < honest; ++j) {
                if (cfg.kex == KexPolicy::on_demand && !(i == 0 && j == 1)) continue;
                if (auto f = node(i).start_key_exchange(node(j).ip())) sim.send(nodes[i], std::move(*f));
            }
        }
        sim.run();
        for (std::size_t i = 0; i < honest; ++i) {
            for (std::size_t j = i + 1; j < honest; ++j) {
                const auto& ki = node(i).key_table();
                const auto& kj = node(j).key_table();
                auto a = ki.find(node(j).ip());
                auto b = kj.find(node(i).ip());
                if (a != ki.end() && b != kj.end() && a->second.key_bytes == b->second.key_bytes) ++rec.key_exchanges;
            }
        }
    }

    Node& alice = node(0);
    const Tick t0 = sim.now();
    sim.send(nodes[0], alice.begin_resolution(target, t0));
    sim.schedule_timer(nodes[0], *alice.next_deadline());
    sim.run();

    const ResolutionRecord& res = alice.resolutions().back();
    rec.resolution.target = target;
    rec.resolution.resolved = res.status == ResolutionStatus::resolved;
    rec.resolution.mac = res.mac;
    if (rec.resolution.resolved) rec.resolution.ticks = *res.finished - res.started;

    for (std::size_t i = 0; i < honest; ++i) rec.nonresponse_violations += node(i).stats().nonresponse_violations;

    if (intruder) {
        const auto& adv = sim.get<Adversary>(*intruder);
        rec.attack = evaluate_attack(alice, target, adv);
        for (const auto& [outcome, mac] : alice.na_log())
            if (outcome == NaOutcome::accepted && mac == adv.mac()) ++rec.forged_accepted;
    }
    rec.counters = sim.counters();

    RunOutput out{std::move(rec), {}};
    if (want_trace) {
        std::ostringstream os;
        sim.write_trace_csv(os);
        out.trace_csv = os.str();
    }
    return out;
}

namespace detail {

inline std::vector<RunAggregate> aggregate_runs(const std::vector<RepetitionRecord>& reps)
{
    std::vector<RunAggregate> out;
    if (reps.empty()) return out;
    const double n = static_cast<double>(reps.size());
    for (std::size_t r = 0; r < reps.front().runs.size(); ++r) {
        RunAggregate a;
        a.label = reps.front().runs[r].label;
        const auto& first = reps.front().runs[r].counters.nodes;
        for (const auto& nc : first) a.nodes.push_back(NodeMeans{nc.name});
        double attack_hits = 0;
        bool has_attack = false;
        for (const auto& rep : reps) {
            const RunRecord& run = rep.runs[r];
            for (std::size_t k = 0; k < a.nodes.size(); ++k) {
                const auto& c = run.counters.nodes[k];
                a.nodes[k].frames_out += static_cast<double>(c.frames_out);
                a.nodes[k].frames_in += static_cast<double>(c.frames_in);
                a.nodes[k].bytes_out += static_cast<double>(c.bytes_out);
                a.nodes[k].bytes_in += static_cast<double>(c.bytes_in);
            }
            a.total_frames += static_cast<double>(run.counters.total_frames);
            a.total_bytes += static_cast<double>(run.counters.total_bytes);
            a.key_exchanges += static_cast<double>(run.key_exchanges);
            a.resolution_rate += run.resolution.resolved ? 1.0 : 0.0;
            a.forged_accepted += static_cast<double>(run.forged_accepted);
            if (run.attack) {
                has_attack = true;
                attack_hits += run.attack->succeeded ? 1.0 : 0.0;
            }
        }
        for (auto& m : a.nodes) {
            m.frames_out /= n;
            m.frames_in /= n;
            m.bytes_out /= n;
            m.bytes_in /= n;
        }
        a.total_frames /= n;
        a.total_bytes /= n;
        a.key_exchanges /= n;
        a.resolution_rate /= n;
        a.forged_accepted /= n;
        if (has_attack) a.attack_success_rate = attack_hits / n;
        out.push_back(std::move(a));
    }
    return out;
}

inline std::string suffixed(const std::string& path, const std::string& label)
{
    auto dot = path.find_last_of('.');
    auto slash = path.find_last_of('/');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) return path + "." + label;
    return path.substr(0, dot) + "." + label + path.substr(dot);
}

}  // namespace detail

inline ExperimentReport run_scenario(const ScenarioConfig& config)
{
    validate(config);

    struct Plan {
        std::string label;
        TargetMode mode;
        bool attacker;
    };
    std::vector<Plan> plans;
    switch (config.scenario) {
    case Scenario::baseline_resolution: plans = {{"baseline", TargetMode::standard, false}}; break;
    case Scenario::proposal_resolution: plans = {{"proposal", TargetMode::hashed, false}}; break;
    case Scenario::baseline_attack: plans = {{"baseline", TargetMode::standard, true}}; break;
    case Scenario::proposal_attack_guess:
    case Scenario::proposal_attack_reflect: plans = {{"proposal", TargetMode::hashed, true}}; break;
    case Scenario::overhead_compare:
        plans = {{"baseline", TargetMode::standard, false}, {"proposal", TargetMode::hashed, false}};
        break;
    }

    const bool want_trace = !config.trace_path.empty();
    std::vector<RepetitionRecord> reps(config.repetitions);
    std::vector<std::string> traces(plans.size());

    auto run_one = [&](std::size_t index) {
        RepetitionRecord& rep = reps[index];
        rep.index = index;
        rep.seed = config.seed + index;
        for (std::size_t p = 0; p < plans.size(); ++p) {
            auto out = simulate_run(config, plans[p].mode, plans[p].label, rep.seed, plans[p].attacker,
                                    want_trace && index == 0);
            rep.runs.push_back(std::move(out.record));
            if (index == 0) traces[p] = std::move(out.trace_csv);
        }
    };

    unsigned workers = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, config.repetitions));
    if (workers <= 1) {
        for (std::size_t i = 0; i < config.repetitions; ++i) run_one(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < config.repetitions; i = next++) {
                    try {
                        run_one(i);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        if (failure) std::rethrow_exception(failure);
    }

    ExperimentReport report;
    report.scenario = to_string(config.scenario);
    if (is_attack(config.scenario) && effective_strategy(config) == AttackStrategy::reflect_hash) {
        report.out_of_model = true;
        report.note = std::string(reflect_note);
    }
    report.config = config;
    report.config.output_path.clear();
    report.config.trace_path.clear();
    report.config.format = ReportFormat::json;
    report.config.threads = 0;
    report.repetitions = std::move(reps);
    report.aggregate = detail::aggregate_runs(report.repetitions);

    if (config.scenario == Scenario::overhead_compare) {
        const RunAggregate& base = report.aggregate[0];
        const RunAggregate& prop = report.aggregate[1];
        auto ratio = [&report](const std::string& key, double num, double den) {
            if (den != 0) report.ratios[key] = num / den;
        };
        ratio("alice_frames_out", prop.nodes[0].frames_out, base.nodes[0].frames_out);
        ratio("alice_frames_in", prop.nodes[0].frames_in, base.nodes[0].frames_in);
        ratio("alice_bytes_out", prop.nodes[0].bytes_out, base.nodes[0].bytes_out);
        ratio("alice_bytes_in", prop.nodes[0].bytes_in, base.nodes[0].bytes_in);
        ratio("total_frames", prop.total_frames, base.total_frames);
        ratio("total_bytes", prop.total_bytes, base.total_bytes);
    }

    if (want_trace) {
        for (std::size_t p = 0; p < plans.size(); ++p) {
            const std::string path =
                plans.size() == 1 ? config.trace_path : detail::suffixed(config.trace_path, plans[p].label);
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out) throw IoError("cannot open trace file for writing: " + path);
            out << traces[p];
        }
    }
    return report;
}

}  // namespace ndsec

#endif  // NDSEC_EXPERIMENT_HPP
