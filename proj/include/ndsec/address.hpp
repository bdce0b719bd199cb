#pragma once
#ifndef NDSEC_ADDRESS_HPP
#define NDSEC_ADDRESS_HPP

#include <arpa/inet.h>

#include <array>
#include <compare>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

#include "ndsec/error.hpp"

namespace ndsec {

using Bytes16 = std::array<std::uint8_t, 16>;

/// 128-bit IPv6 address in network byte order.
struct Ipv6Address {
    Bytes16 bytes{};

    static std::optional<Ipv6Address> parse(std::string_view text)
    {
        std::string buf(text);
        Ipv6Address a;
        if (inet_pton(AF_INET6, buf.c_str(), a.bytes.data()) != 1) return std::nullopt;
        return a;
    }

    static Ipv6Address from_string(std::string_view text)
    {
        auto a = parse(text);
        if (!a) throw ParameterError("not an IPv6 address: " + std::string(text));
        return *a;
    }

    /// fe80::/64 link-local address with the given 64-bit interface identifier.
    static Ipv6Address link_local(std::uint64_t interface_id)
    {
        Ipv6Address a;
        a.bytes[0] = 0xfe;
        a.bytes[1] = 0x80;
        for (int i = 0; i < 8; ++i) a.bytes[15 - i] = static_cast<std::uint8_t>(interface_id >> (8 * i));
        return a;
    }

    static Ipv6Address all_nodes() { return from_string("ff02::1"); }

    bool is_multicast() const noexcept { return bytes[0] == 0xff; }

    std::string to_string() const
    {
        char buf[INET6_ADDRSTRLEN] = {};
        inet_ntop(AF_INET6, bytes.data(), buf, sizeof buf);
        return buf;
    }

    std::span<const std::uint8_t, 16> view() const noexcept { return bytes; }

    friend auto operator<=>(const Ipv6Address&, const Ipv6Address&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const Ipv6Address& a) { return os << a.to_string(); }

struct MacAddress {
    std::array<std::uint8_t, 6> bytes{};

    static std::optional<MacAddress> parse(std::string_view text)
    {
        MacAddress m;
        unsigned v[6];
        char tail;
        std::string buf(text);
        if (std::sscanf(buf.c_str(), "%2x:%2x:%2x:%2x:%2x:%2x%c", &v[0], &v[1], &v[2], &v[3], &v[4], &v[5],
                        &tail) != 6)
            return std::nullopt;
        for (int i = 0; i < 6; ++i) m.bytes[i] = static_cast<std::uint8_t>(v[i]);
        return m;
    }

    static MacAddress from_string(std::string_view text)
    {
        auto m = parse(text);
        if (!m) throw ParameterError("not a MAC address: " + std::string(text));
        return *m;
    }

    /// 33:33:00:00:00:01, the Ethernet mapping of ff02::1.
    static MacAddress all_nodes() { return MacAddress{{0x33, 0x33, 0x00, 0x00, 0x00, 0x01}}; }

    std::string to_string() const
    {
        char buf[18];
        std::snprintf(buf, sizeof buf, "%02x:%02x:%02x:%02x:%02x:%02x", bytes[0], bytes[1], bytes[2], bytes[3],
                      bytes[4], bytes[5]);
        return buf;
    }

    friend auto operator<=>(const MacAddress&, const MacAddress&) = default;
};

inline std::ostream& operator<<(std::ostream& os, const MacAddress& m) { return os << m.to_string(); }

}  // namespace ndsec

#endif  // NDSEC_ADDRESS_HPP
