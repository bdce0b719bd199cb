#pragma once
#ifndef NDSEC_ADVERSARY_HPP
#define NDSEC_ADVERSARY_HPP

// The intruder: a promiscuous tap that answers every observed NS with a
// burst of forged NAs carrying its own MAC. It holds no pairwise keys.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ndsec/address.hpp"
#include "ndsec/error.hpp"
#include "ndsec/ndp_codec.hpp"
#include "ndsec/netsim.hpp"
#include "ndsec/node_engine.hpp"

namespace ndsec {

enum class AttackStrategy {
    sniff_plaintext,  // copy the plaintext Target of a code-0 NS
    guess_pool,       // forge one burst per candidate address
    reflect_hash,     // echo the observed Target bytes, whatever they are
};

inline const char* to_string(AttackStrategy s)
{
    switch (s) {
    case AttackStrategy::sniff_plaintext: return "sniff_plaintext";
    case AttackStrategy::guess_pool: return "guess_pool";
    case AttackStrategy::reflect_hash: return "reflect_hash";
    }
    return "unknown";
}

inline std::optional<AttackStrategy> parse_strategy(std::string_view s)
{
    if (s == "sniff_plaintext") return AttackStrategy::sniff_plaintext;
    if (s == "guess_pool") return AttackStrategy::guess_pool;
    if (s == "reflect_hash") return AttackStrategy::reflect_hash;
    return std::nullopt;
}

inline constexpr std::size_t default_burst_size = 5;
inline constexpr Tick default_attacker_latency = 1;

struct AttackerConfig {
    AttackStrategy strategy = AttackStrategy::sniff_plaintext;
    std::size_t burst_size = default_burst_size;
    std::vector<Ipv6Address> guess_pool;
    Ipv6Address own_ip = Ipv6Address::link_local(0xdeadbeef);
    MacAddress own_mac{{0x02, 0xde, 0xad, 0xbe, 0xef, 0x00}};
    Tick latency = default_attacker_latency;

    void validate() const
    {
        std::vector<std::string> bad;
        if (burst_size < 1) bad.emplace_back("burst_size: must be >= 1");
        if (strategy == AttackStrategy::guess_pool && guess_pool.empty())
            bad.emplace_back("guess_pool: must be non-empty for the guess_pool strategy");
        if (!bad.empty()) throw ConfigError(std::move(bad));
    }
};

struct AttackOutcome {
    bool succeeded = false;
    std::optional<MacAddress> victim_cached_mac;
    std::uint64_t forged_frames_sent = 0;

    friend bool operator==(const AttackOutcome&, const AttackOutcome&) = default;
};

namespace detail {

inline SimFrame forge_na(const AttackerConfig& cfg, const SimFrame& ns_frame, const NeighborSolicitation& ns,
                         TargetMode mode, const Bytes16& target, const Ipv6Address& claimed_src)
{
    NeighborAdvertisement na;
    na.mode = mode;
    na.solicited = true;
    na.override_flag = true;
    na.target = target;
    na.target_lla = cfg.own_mac;

    SimFrame f;
    f.src_mac = cfg.own_mac;
    f.dst_mac = ns.source_lla;
    f.src_ip = claimed_src;
    f.dst_ip = ns_frame.src_ip;
    f.payload = encode(na, f.src_ip, f.dst_ip);
    f.send_time = ns_frame.deliver_time;
    return f;
}

}  // namespace detail

/// Forged frames in response to one observed frame. Non-NS frames yield nothing.
inline std::vector<SimFrame> on_observe(const AttackerConfig& cfg, const SimFrame& frame)
{
    NdpMessage msg;
    try {
        msg = decode(frame.payload, frame.src_ip, frame.dst_ip);
    } catch (const CodecError&) {
        return {};
    }
    const auto* ns = std::get_if<NeighborSolicitation>(&msg);
    if (!ns) return {};

    std::vector<SimFrame> out;
    switch (cfg.strategy) {
    case AttackStrategy::sniff_plaintext: {
        if (ns->mode != TargetMode::standard) break;  // nothing readable
        Ipv6Address victim_target{ns->target};
        for (std::size_t i = 0; i < cfg.burst_size; ++i)
            out.push_back(detail::forge_na(cfg, frame, *ns, ns->mode, ns->target, victim_target));
        break;
    }
    case AttackStrategy::guess_pool:
        for (const auto& candidate : cfg.guess_pool)
            for (std::size_t i = 0; i < cfg.burst_size; ++i)
                out.push_back(detail::forge_na(cfg, frame, *ns, ns->mode, candidate.bytes, candidate));
        break;
    case AttackStrategy::reflect_hash:
        for (std::size_t i = 0; i < cfg.burst_size; ++i)
            out.push_back(detail::forge_na(cfg, frame, *ns, ns->mode, ns->target, cfg.own_ip));
        break;
    }
    return out;
}

class Adversary : public Endpoint {
public:
    explicit Adversary(AttackerConfig config) : config_(std::move(config)) { config_.validate(); }

    Ipv6Address ip() const override { return config_.own_ip; }
    MacAddress mac() const override { return config_.own_mac; }
    bool promiscuous() const override { return true; }

    std::vector<SimFrame> on_frame(const SimFrame& frame, const NdpMessage& message, Tick /*now*/) override
    {
        if (!std::holds_alternative<NeighborSolicitation>(message)) return {};
        ++ns_observed_;
        auto forged = on_observe(config_, frame);
        forged_sent_ += forged.size();
        return forged;
    }

    const AttackerConfig& config() const noexcept { return config_; }
    std::uint64_t forged_frames_sent() const noexcept { return forged_sent_; }
    std::uint64_t ns_observed() const noexcept { return ns_observed_; }

private:
    AttackerConfig config_;
    std::uint64_t forged_sent_ = 0;
    std::uint64_t ns_observed_ = 0;
};

/// Success means the victim's cache maps the true target to the attacker's MAC.
inline AttackOutcome evaluate_attack(const Node& victim, const Ipv6Address& true_target, const Adversary& attacker)
{
    AttackOutcome o;
    o.victim_cached_mac = victim.lookup(true_target);
    o.succeeded = o.victim_cached_mac && *o.victim_cached_mac == attacker.mac();
    o.forged_frames_sent = attacker.forged_frames_sent();
    return o;
}

}  // namespace ndsec

#endif  // NDSEC_ADVERSARY_HPP
