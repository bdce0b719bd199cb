#pragma once
#ifndef NDSEC_NDP_CODEC_HPP
#define NDSEC_NDP_CODEC_HPP

// Wire codec for NS (135), NA (136) and the key-exchange messages KexInit (200)
// and KexResp (201). Layouts:
//
//   NS   type code cksum[2] reserved[4] target[16] opt(1,1) mac[6]        32 bytes
//   NA   type code cksum[2] flags reserved[3] target[16] opt(2,1) mac[6]  32 bytes
//   Kex  type 0 cksum[2] length[2] public[length]
//
// Code 1 on NS/NA marks hashed mode: the Target field holds a HashedTarget.

#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "ndsec/address.hpp"
#include "ndsec/error.hpp"

namespace ndsec {

enum class TargetMode : std::uint8_t { standard = 0, hashed = 1 };

inline const char* to_string(TargetMode m) { return m == TargetMode::hashed ? "hashed" : "standard"; }

namespace icmp6 {
inline constexpr std::uint8_t neighbor_solicitation = 135;
inline constexpr std::uint8_t neighbor_advertisement = 136;
inline constexpr std::uint8_t kex_init = 200;
inline constexpr std::uint8_t kex_resp = 201;
inline constexpr std::uint8_t next_header = 58;

inline constexpr std::uint8_t opt_source_lla = 1;
inline constexpr std::uint8_t opt_target_lla = 2;

inline constexpr std::uint8_t flag_router = 0x80;
inline constexpr std::uint8_t flag_solicited = 0x40;
inline constexpr std::uint8_t flag_override = 0x20;

inline constexpr std::size_t nd_message_size = 32;
inline constexpr std::size_t target_offset = 8;
}  // namespace icmp6

struct NeighborSolicitation {
    TargetMode mode = TargetMode::standard;
    Bytes16 target{};
    MacAddress source_lla;

    friend bool operator==(const NeighborSolicitation&, const NeighborSolicitation&) = default;
};

struct NeighborAdvertisement {
    TargetMode mode = TargetMode::standard;
    bool router = false;
    bool solicited = false;
    bool override_flag = false;
    Bytes16 target{};
    MacAddress target_lla;

    friend bool operator==(const NeighborAdvertisement&, const NeighborAdvertisement&) = default;
};

struct KexInit {
    std::vector<std::uint8_t> public_value;  // big-endian
    friend bool operator==(const KexInit&, const KexInit&) = default;
};

struct KexResp {
    std::vector<std::uint8_t> public_value;
    friend bool operator==(const KexResp&, const KexResp&) = default;
};

using NdpMessage = std::variant<NeighborSolicitation, NeighborAdvertisement, KexInit, KexResp>;

inline std::uint8_t message_type(const NdpMessage& m)
{
    return std::visit(
        [](const auto& v) -> std::uint8_t {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, NeighborSolicitation>) return icmp6::neighbor_solicitation;
            else if constexpr (std::is_same_v<T, NeighborAdvertisement>) return icmp6::neighbor_advertisement;
            else if constexpr (std::is_same_v<T, KexInit>) return icmp6::kex_init;
            else return icmp6::kex_resp;
        },
        m);
}

inline std::uint8_t message_code(const NdpMessage& m)
{
    if (auto* ns = std::get_if<NeighborSolicitation>(&m)) return static_cast<std::uint8_t>(ns->mode);
    if (auto* na = std::get_if<NeighborAdvertisement>(&m)) return static_cast<std::uint8_t>(na->mode);
    return 0;
}

/// One's complement of the one's-complement sum over the IPv6 pseudo-header
/// (src, dst, 32-bit length, 3 zero bytes, next header 58) and the payload.
/// The caller zeroes the checksum field in `payload` before calling.
inline std::uint16_t icmpv6_checksum(const Ipv6Address& src, const Ipv6Address& dst,
                                     std::span<const std::uint8_t> payload)
{
    std::uint64_t sum = 0;
    auto add_words = [&sum](std::span<const std::uint8_t> data) {
        std::size_t i = 0;
        for (; i + 1 < data.size(); i += 2) sum += (std::uint32_t{data[i]} << 8) | data[i + 1];
        if (i < data.size()) sum += std::uint32_t{data[i]} << 8;
    };
    add_words(src.bytes);
    add_words(dst.bytes);
    const auto len = static_cast<std::uint32_t>(payload.size());
    sum += len >> 16;
    sum += len & 0xffff;
    sum += icmp6::next_header;
    add_words(payload);
    while (sum >> 16) sum = (sum & 0xffff) + (sum >> 16);
    return static_cast<std::uint16_t>(~sum);
}

namespace detail {

inline void put_target_and_option(std::vector<std::uint8_t>& out, const Bytes16& target, std::uint8_t opt_type,
                                  const MacAddress& mac)
{
    out.insert(out.end(), target.begin(), target.end());
    out.push_back(opt_type);
    out.push_back(1);  // option length in units of 8 bytes
    out.insert(out.end(), mac.bytes.begin(), mac.bytes.end());
}

inline void put_kex(std::vector<std::uint8_t>& out, std::uint8_t type, const std::vector<std::uint8_t>& pub)
{
    if (pub.size() > 0xffff) throw CodecError(CodecErrc::too_large, "public value exceeds 65535 bytes");
    out = {type, 0, 0, 0, static_cast<std::uint8_t>(pub.size() >> 8), static_cast<std::uint8_t>(pub.size())};
    out.insert(out.end(), pub.begin(), pub.end());
}

}  // namespace detail

inline std::vector<std::uint8_t> encode(const NdpMessage& message, const Ipv6Address& src_ip,
                                        const Ipv6Address& dst_ip)
{
    std::vector<std::uint8_t> out;
    out.reserve(icmp6::nd_message_size);
    std::visit(
        [&out](const auto& m) {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, NeighborSolicitation>) {
                out = {icmp6::neighbor_solicitation, static_cast<std::uint8_t>(m.mode), 0, 0, 0, 0, 0, 0};
                detail::put_target_and_option(out, m.target, icmp6::opt_source_lla, m.source_lla);
            } else if constexpr (std::is_same_v<T, NeighborAdvertisement>) {
                std::uint8_t flags = (m.router ? icmp6::flag_router : 0) |
                                     (m.solicited ? icmp6::flag_solicited : 0) |
                                     (m.override_flag ? icmp6::flag_override : 0);
                out = {icmp6::neighbor_advertisement, static_cast<std::uint8_t>(m.mode), 0, 0, flags, 0, 0, 0};
                detail::put_target_and_option(out, m.target, icmp6::opt_target_lla, m.target_lla);
            } else if constexpr (std::is_same_v<T, KexInit>) {
                detail::put_kex(out, icmp6::kex_init, m.public_value);
            } else {
                detail::put_kex(out, icmp6::kex_resp, m.public_value);
            }
        },
        message);
    const std::uint16_t ck = icmpv6_checksum(src_ip, dst_ip, out);
    out[2] = static_cast<std::uint8_t>(ck >> 8);
    out[3] = static_cast<std::uint8_t>(ck);
    return out;
}

namespace detail {

inline void require_option(std::span<const std::uint8_t> b, std::uint8_t expected_type)
{
    if (b[24] != expected_type) throw CodecError(CodecErrc::malformed, "unexpected link-layer option type");
    if (b[25] != 1) throw CodecError(CodecErrc::malformed, "link-layer option length must be 1");
}

inline bool all_zero(std::span<const std::uint8_t> b)
{
    for (auto x : b)
        if (x != 0) return false;
    return true;
}

}  // namespace detail

/// Structure is checked before the checksum, so a truncated image reports
/// `malformed` rather than `checksum`.
inline NdpMessage decode(std::span<const std::uint8_t> bytes, const Ipv6Address& src_ip, const Ipv6Address& dst_ip)
{
    if (bytes.size() < 4) throw CodecError(CodecErrc::malformed, "shorter than the ICMPv6 header");
    const std::uint8_t type = bytes[0];
    const std::uint8_t code = bytes[1];

    const bool nd = type == icmp6::neighbor_solicitation || type == icmp6::neighbor_advertisement;
    const bool kex = type == icmp6::kex_init || type == icmp6::kex_resp;
    if (!nd && !kex) throw CodecError(CodecErrc::unsupported, "ICMPv6 type " + std::to_string(type));
    if ((nd && code > 1) || (kex && code != 0))
        throw CodecError(CodecErrc::unsupported, "ICMPv6 code " + std::to_string(code));

    std::size_t kex_length = 0;
    if (nd) {
        if (bytes.size() != icmp6::nd_message_size)
            throw CodecError(CodecErrc::malformed, "NS/NA must be exactly 32 bytes");
        if (type == icmp6::neighbor_solicitation) {
            if (!detail::all_zero(bytes.subspan(4, 4))) throw CodecError(CodecErrc::malformed, "reserved bytes");
            detail::require_option(bytes, icmp6::opt_source_lla);
        } else {
            if ((bytes[4] & 0x1f) != 0 || !detail::all_zero(bytes.subspan(5, 3)))
                throw CodecError(CodecErrc::malformed, "reserved bits");
            detail::require_option(bytes, icmp6::opt_target_lla);
        }
    } else {
        if (bytes.size() < 6) throw CodecError(CodecErrc::malformed, "missing public value length");
        kex_length = (std::size_t{bytes[4]} << 8) | bytes[5];
        if (bytes.size() != 6 + kex_length)
            throw CodecError(CodecErrc::malformed, "public value length does not match message size");
    }

    std::vector<std::uint8_t> zeroed(bytes.begin(), bytes.end());
    zeroed[2] = zeroed[3] = 0;
    const std::uint16_t stored = static_cast<std::uint16_t>((bytes[2] << 8) | bytes[3]);
    if (icmpv6_checksum(src_ip, dst_ip, zeroed) != stored) throw CodecError(CodecErrc::checksum, "bad checksum");

    Bytes16 target{};
    MacAddress mac;
    if (nd) {
        std::copy_n(bytes.begin() + icmp6::target_offset, 16, target.begin());
        std::copy_n(bytes.begin() + 26, 6, mac.bytes.begin());
    }
    const auto mode = static_cast<TargetMode>(code);

    switch (type) {
    case icmp6::neighbor_solicitation:
        return NeighborSolicitation{mode, target, mac};
    case icmp6::neighbor_advertisement:
        return NeighborAdvertisement{mode, (bytes[4] & icmp6::flag_router) != 0,
                                     (bytes[4] & icmp6::flag_solicited) != 0,
                                     (bytes[4] & icmp6::flag_override) != 0, target, mac};
    case icmp6::kex_init:
        return KexInit{std::vector<std::uint8_t>(bytes.begin() + 6, bytes.end())};
    default:
        return KexResp{std::vector<std::uint8_t>(bytes.begin() + 6, bytes.end())};
    }
}

/// Debug printer: one line per wire field, hex bytes then a gloss.
inline std::string hex_dump(std::span<const std::uint8_t> bytes)
{
    std::string out;
    auto line = [&out, bytes](const char* name, std::size_t from, std::size_t to, const std::string& gloss) {
        char label[16];
        std::snprintf(label, sizeof label, "%-10s", name);
        out += label;
        for (std::size_t i = from; i < to && i < bytes.size(); ++i) {
            char h[4];
            std::snprintf(h, sizeof h, i == from ? "%02x" : " %02x", bytes[i]);
            out += h;
        }
        if (!gloss.empty()) out += "  (" + gloss + ")";
        out += '\n';
    };

    if (bytes.size() < 4) {
        line("raw", 0, bytes.size(), "truncated");
        return out;
    }
    const std::uint8_t type = bytes[0];
    const char* type_name = type == icmp6::neighbor_solicitation    ? "neighbor solicitation"
                            : type == icmp6::neighbor_advertisement ? "neighbor advertisement"
                            : type == icmp6::kex_init               ? "kex init"
                            : type == icmp6::kex_resp               ? "kex resp"
                                                                    : "unknown";
    line("type", 0, 1, std::to_string(type) + " " + type_name);
    const bool nd = type == icmp6::neighbor_solicitation || type == icmp6::neighbor_advertisement;
    line("code", 1, 2, nd ? (bytes[1] == 1 ? "hashed" : bytes[1] == 0 ? "standard" : "unknown") : "");
    line("checksum", 2, 4, "");
    if (nd && bytes.size() == icmp6::nd_message_size) {
        if (type == icmp6::neighbor_advertisement) {
            std::string f;
            if (bytes[4] & icmp6::flag_router) f += "R";
            if (bytes[4] & icmp6::flag_solicited) f += "S";
            if (bytes[4] & icmp6::flag_override) f += "O";
            line("flags", 4, 5, f.empty() ? "-" : f);
            line("reserved", 5, 8, "");
        } else {
            line("reserved", 4, 8, "");
        }
        Ipv6Address t;
        std::copy_n(bytes.begin() + 8, 16, t.bytes.begin());
        line("target", 8, 24, bytes[1] == 0 ? t.to_string() : "hash");
        line("option", 24, 26, bytes[24] == icmp6::opt_source_lla ? "source link-layer address"
                               : bytes[24] == icmp6::opt_target_lla ? "target link-layer address"
                                                                     : "unknown");
        MacAddress m;
        std::copy_n(bytes.begin() + 26, 6, m.bytes.begin());
        line("lladdr", 26, 32, m.to_string());
    } else if (!nd && bytes.size() >= 6) {
        line("length", 4, 6, std::to_string((bytes[4] << 8) | bytes[5]));
        line("public", 6, bytes.size(), "");
    } else {
        line("body", 4, bytes.size(), "unparsed");
    }
    return out;
}

}  // namespace ndsec

#endif  // NDSEC_NDP_CODEC_HPP
