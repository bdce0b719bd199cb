#pragma once
#ifndef NDSEC_NODE_ENGINE_HPP
#define NDSEC_NODE_ENGINE_HPP

// Per-host neighbor discovery state machine, standard or hashed mode.
//
// Hashed mode runs in two phases. Pairwise DH keys are established with
// KexInit/KexResp. Resolution then sends a code-1 NS to ff02::1 whose Target
// is hash_target(key, target). Only the host whose precomputed self-hash
// matches answers, and the NA echoes the hash. The resolver caches the MAC
// from the first NA whose Target equals its pending match key.

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndsec/address.hpp"
#include "ndsec/dh_keyex.hpp"
#include "ndsec/error.hpp"
#include "ndsec/hashed_target.hpp"
#include "ndsec/ndp_codec.hpp"
#include "ndsec/netsim.hpp"

namespace ndsec {

inline constexpr Tick default_resolution_timeout = 100;

struct NodeConfig {
    std::string name;
    Ipv6Address ip;
    MacAddress mac;
    TargetMode mode = TargetMode::standard;
    DhGroup group = DhGroup::modp2048();
    std::uint64_t dh_seed = 0;
    Tick resolution_timeout = default_resolution_timeout;
};

struct CacheEntry {
    MacAddress mac;
    Tick established_at = 0;

    friend bool operator==(const CacheEntry&, const CacheEntry&) = default;
};

struct PendingResolution {
    Ipv6Address target_ip;
    Bytes16 match_key{};
    Tick started = 0;
    Tick deadline = 0;
};

enum class NaOutcome { accepted, ignored_duplicate, ignored_unsolicited };

inline const char* to_string(NaOutcome o)
{
    switch (o) {
    case NaOutcome::accepted: return "accepted";
    case NaOutcome::ignored_duplicate: return "ignored_duplicate";
    case NaOutcome::ignored_unsolicited: return "ignored_unsolicited";
    }
    return "unknown";
}

enum class ResolutionStatus { pending, resolved, failed };

struct ResolutionRecord {
    Ipv6Address target_ip;
    Tick started = 0;
    std::optional<Tick> finished;
    ResolutionStatus status = ResolutionStatus::pending;
    std::optional<MacAddress> mac;
};

/// Wire Target bytes of every NS this node sent, with the address it was resolving.
struct EmittedNs {
    Ipv6Address target_ip;
    TargetMode mode;
    Bytes16 target_field{};
};

struct NodeStats {
    std::uint64_t ns_received = 0;
    std::uint64_t ns_answered = 0;
    std::uint64_t ns_dropped = 0;
    std::uint64_t na_accepted = 0;
    std::uint64_t na_duplicate = 0;
    std::uint64_t na_unsolicited = 0;
    std::uint64_t kex_completed = 0;
    std::uint64_t kex_rejected = 0;
    std::uint64_t kex_ignored = 0;
    /// NAs sent for a code-1 NS that fails verification under every held key. Must stay 0.
    std::uint64_t nonresponse_violations = 0;
};

/// Produces the ephemeral keypair for an exchange with `peer`.
using KeySource = std::function<DhKeyPair(const DhGroup&, const Ipv6Address& peer)>;

class Node : public Endpoint {
public:
    explicit Node(NodeConfig config) : config_(std::move(config))
    {
        config_.group.validate();
        key_source_ = [seed = config_.dh_seed](const DhGroup& g, const Ipv6Address& peer) {
            return generate_keypair(g, exchange_seed(seed, peer));
        };
    }

    // Endpoint
    Ipv6Address ip() const override { return config_.ip; }
    MacAddress mac() const override { return config_.mac; }

    const NodeConfig& config() const noexcept { return config_; }
    TargetMode mode() const noexcept { return config_.mode; }

    void set_key_source(KeySource source) { key_source_ = std::move(source); }

    /// Returns nullopt when a key already exists or an exchange is already in flight.
    std::optional<SimFrame> start_key_exchange(const Ipv6Address& peer_ip)
    {
        require_hashed("start_key_exchange");
        if (peer_ip == config_.ip) throw ProtocolError(ProtocolErrc::self_target, "key exchange with self");
        if (key_table_.contains(peer_ip) || dh_state_.contains(peer_ip)) return std::nullopt;

        DhKeyPair kp = key_source_(config_.group, peer_ip);
        KexInit init{to_bytes(kp.public_value)};
        dh_state_.emplace(peer_ip, std::move(kp));
        // Peer MAC is not known yet; the link routes unicast by IP.
        return make_frame(init, peer_ip, MacAddress{});
    }

    /// Answers a KexInit with a KexResp and stores the pairwise key.
    ///
    /// If both sides initiated, the lower address keeps its own exchange and
    /// ignores the peer's KexInit; the higher address abandons its own.
    std::optional<SimFrame> handle_kex(const KexInit& msg, const Ipv6Address& src_ip, const MacAddress& src_mac = {})
    {
        require_hashed("handle_kex");
        const BigInt peer_public = from_bytes(msg.public_value);
        if (!config_.group.acceptable_public(peer_public))
            throw ProtocolError(ProtocolErrc::degenerate_public, "KexInit from " + src_ip.to_string());
        if (dh_state_.contains(src_ip)) {
            if (config_.ip < src_ip) {
                ++stats_.kex_ignored;
                return std::nullopt;
            }
            dh_state_.erase(src_ip);
        }
        DhKeyPair kp = key_source_(config_.group, src_ip);
        install_key(src_ip, compute_shared_secret(kp, peer_public, config_.group));
        return make_frame(KexResp{to_bytes(kp.public_value)}, src_ip, src_mac);
    }

    std::optional<SimFrame> handle_kex(const KexResp& msg, const Ipv6Address& src_ip)
    {
        require_hashed("handle_kex");
        auto it = dh_state_.find(src_ip);
        if (it == dh_state_.end())
            throw ProtocolError(ProtocolErrc::protocol_order, "KexResp without pending exchange from " +
                                                                  src_ip.to_string());
        const BigInt peer_public = from_bytes(msg.public_value);
        if (!config_.group.acceptable_public(peer_public)) {
            dh_state_.erase(it);
            throw ProtocolError(ProtocolErrc::degenerate_public, "KexResp from " + src_ip.to_string());
        }
        install_key(src_ip, compute_shared_secret(it->second, peer_public, config_.group));
        dh_state_.erase(it);
        return std::nullopt;
    }

    /// Multicasts an NS for `target_ip` and records the pending resolution.
    SimFrame begin_resolution(const Ipv6Address& target_ip, Tick now)
    {
        if (target_ip == config_.ip) throw ProtocolError(ProtocolErrc::self_target, "cannot resolve own address");
        for (const auto& [key, p] : pending_)
            if (p.target_ip == target_ip)
                throw ProtocolError(ProtocolErrc::already_pending, "resolution in flight for " +
                                                                       target_ip.to_string());

        Bytes16 match = target_ip.bytes;
        if (config_.mode == TargetMode::hashed) {
            auto it = key_table_.find(target_ip);
            if (it == key_table_.end())
                throw ProtocolError(ProtocolErrc::missing_key, "no pairwise key for " + target_ip.to_string());
            match = hash_target(it->second.key_bytes, target_ip).bytes;
        }

        pending_[match] = PendingResolution{target_ip, match, now, now + config_.resolution_timeout};
        completed_.erase(match);
        resolutions_.push_back(ResolutionRecord{target_ip, now, std::nullopt, ResolutionStatus::pending, std::nullopt});
        emitted_ns_.push_back(EmittedNs{target_ip, config_.mode, match});

        NeighborSolicitation ns{config_.mode, match, config_.mac};
        return make_frame(ns, Ipv6Address::all_nodes(), MacAddress::all_nodes());
    }

    /// Replies with an NA iff the NS targets this host. Mode mismatches are dropped.
    std::optional<SimFrame> handle_ns(const NeighborSolicitation& msg, const Ipv6Address& src_ip)
    {
        ++stats_.ns_received;
        bool answer = false;
        if (msg.mode != config_.mode) {
            answer = false;
        } else if (msg.mode == TargetMode::standard) {
            answer = msg.target == config_.ip.bytes;
        } else {
            auto it = self_hash_table_.find(src_ip);
            answer = it != self_hash_table_.end() && constant_time_equal(it->second.bytes, msg.target);
        }
        if (!answer) {
            ++stats_.ns_dropped;
            return std::nullopt;
        }

        if (msg.mode == TargetMode::hashed && !verifies_under_any_key(HashedTarget{msg.target}))
            ++stats_.nonresponse_violations;

        ++stats_.ns_answered;
        NeighborAdvertisement na;
        na.mode = msg.mode;
        na.solicited = true;
        na.override_flag = true;
        na.target = msg.target;
        na.target_lla = config_.mac;
        return make_frame(na, src_ip, msg.source_lla);
    }

    NaOutcome handle_na(const NeighborAdvertisement& msg, const Ipv6Address& /*src_ip*/, Tick now)
    {
        if (msg.mode != config_.mode) {
            ++stats_.na_unsolicited;
            return NaOutcome::ignored_unsolicited;
        }
        auto it = pending_.find(msg.target);
        if (it == pending_.end()) {
            if (completed_.contains(msg.target)) {
                ++stats_.na_duplicate;
                return NaOutcome::ignored_duplicate;
            }
            ++stats_.na_unsolicited;
            return NaOutcome::ignored_unsolicited;
        }

        const PendingResolution p = it->second;
        pending_.erase(it);
        completed_.emplace(p.match_key, p.target_ip);
        neighbor_cache_[p.target_ip] = CacheEntry{msg.target_lla, now};
        for (auto& r : resolutions_) {
            if (r.target_ip == p.target_ip && r.status == ResolutionStatus::pending) {
                r.status = ResolutionStatus::resolved;
                r.finished = now;
                r.mac = msg.target_lla;
            }
        }
        ++stats_.na_accepted;
        return NaOutcome::accepted;
    }

    std::optional<MacAddress> lookup(const Ipv6Address& ip) const
    {
        auto it = neighbor_cache_.find(ip);
        if (it == neighbor_cache_.end()) return std::nullopt;
        return it->second.mac;
    }

    /// Drops pending entries whose deadline has been reached and marks them failed.
    void reap_expired(Tick now)
    {
        for (auto it = pending_.begin(); it != pending_.end();) {
            if (now < it->second.deadline) {
                ++it;
                continue;
            }
            for (auto& r : resolutions_) {
                if (r.target_ip == it->second.target_ip && r.status == ResolutionStatus::pending) {
                    r.status = ResolutionStatus::failed;
                    r.finished = now;
                }
            }
            it = pending_.erase(it);
        }
    }

    std::optional<Tick> next_deadline() const
    {
        std::optional<Tick> d;
        for (const auto& [k, p] : pending_)
            if (!d || p.deadline < *d) d = p.deadline;
        return d;
    }

    // Endpoint
    std::vector<SimFrame> on_frame(const SimFrame& frame, const NdpMessage& message, Tick now) override
    {
        std::vector<SimFrame> out;
        auto emit = [&out](std::optional<SimFrame> f) {
            if (f) out.push_back(std::move(*f));
        };
        try {
            if (auto* ns = std::get_if<NeighborSolicitation>(&message)) {
                emit(handle_ns(*ns, frame.src_ip));
            } else if (auto* na = std::get_if<NeighborAdvertisement>(&message)) {
                na_log_.emplace_back(handle_na(*na, frame.src_ip, now), na->target_lla);
            } else if (config_.mode == TargetMode::hashed) {
                if (auto* init = std::get_if<KexInit>(&message)) emit(handle_kex(*init, frame.src_ip, frame.src_mac));
                else emit(handle_kex(std::get<KexResp>(message), frame.src_ip));
            }
        } catch (const ProtocolError&) {
            ++stats_.kex_rejected;
        }
        for (auto& f : out) f.send_time = now;
        return out;
    }

    void on_clock(Tick now) override { reap_expired(now); }

    const std::map<Ipv6Address, PairwiseKey>& key_table() const noexcept { return key_table_; }
    const std::map<Ipv6Address, HashedTarget>& self_hash_table() const noexcept { return self_hash_table_; }
    const std::map<Ipv6Address, CacheEntry>& neighbor_cache() const noexcept { return neighbor_cache_; }
    const std::map<Bytes16, PendingResolution>& pending() const noexcept { return pending_; }
    const std::map<Ipv6Address, DhKeyPair>& dh_state() const noexcept { return dh_state_; }
    const std::vector<ResolutionRecord>& resolutions() const noexcept { return resolutions_; }
    const std::vector<EmittedNs>& emitted_ns() const noexcept { return emitted_ns_; }
    /// Outcome and carried MAC of every NA this node processed, in arrival order.
    const std::vector<std::pair<NaOutcome, MacAddress>>& na_log() const noexcept { return na_log_; }
    const NodeStats& stats() const noexcept { return stats_; }

    /// Per-exchange DH seed: node seed mixed with the peer address (splitmix64 steps).
    static std::uint64_t exchange_seed(std::uint64_t node_seed, const Ipv6Address& peer)
    {
        std::uint64_t h = node_seed;
        for (std::size_t i = 0; i < 16; i += 8) {
            std::uint64_t chunk = 0;
            for (std::size_t j = 0; j < 8; ++j) chunk = (chunk << 8) | peer.bytes[i + j];
            h = splitmix(h ^ chunk);
        }
        return h;
    }

    static std::uint64_t splitmix(std::uint64_t x)
    {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

private:
    void require_hashed(const char* op) const
    {
        if (config_.mode != TargetMode::hashed)
            throw ProtocolError(ProtocolErrc::wrong_mode, std::string(op) + " requires hashed mode");
    }

    void install_key(const Ipv6Address& peer, const BigInt& shared_secret)
    {
        key_table_[peer] = PairwiseKey{peer, derive_hmac_key(shared_secret)};
        std::map<Ipv6Address, SecretKey> keys;
        for (const auto& [ip, k] : key_table_) keys.emplace(ip, k.key_bytes);
        self_hash_table_ = precompute_self_hashes(config_.ip, keys);
        ++stats_.kex_completed;
    }

    bool verifies_under_any_key(const HashedTarget& h) const
    {
        bool any = false;
        for (const auto& [ip, k] : key_table_) any = verify_target(k.key_bytes, config_.ip, h) || any;
        return any;
    }

    SimFrame make_frame(const NdpMessage& m, const Ipv6Address& dst_ip, const MacAddress& dst_mac) const
    {
        SimFrame f;
        f.src_mac = config_.mac;
        f.dst_mac = dst_mac;
        f.src_ip = config_.ip;
        f.dst_ip = dst_ip;
        f.payload = encode(m, f.src_ip, f.dst_ip);
        return f;
    }

    NodeConfig config_;
    KeySource key_source_;
    std::map<Ipv6Address, PairwiseKey> key_table_;
    std::map<Ipv6Address, HashedTarget> self_hash_table_;
    std::map<Ipv6Address, CacheEntry> neighbor_cache_;
    std::map<Bytes16, PendingResolution> pending_;
    std::map<Bytes16, Ipv6Address> completed_;
    std::map<Ipv6Address, DhKeyPair> dh_state_;
    std::vector<ResolutionRecord> resolutions_;
    std::vector<EmittedNs> emitted_ns_;
    std::vector<std::pair<NaOutcome, MacAddress>> na_log_;
    NodeStats stats_;
};

}  // namespace ndsec

#endif  // NDSEC_NODE_ENGINE_HPP
