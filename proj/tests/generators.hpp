#pragma once

// Hand-rolled random generators for property tests.

#include <random>

#include "ndsec/address.hpp"
#include "ndsec/ndp_codec.hpp"

namespace gen {

inline ndsec::Ipv6Address address(std::mt19937_64& rng)
{
    ndsec::Ipv6Address a;
    for (auto& b : a.bytes) b = static_cast<std::uint8_t>(rng());
    return a;
}

inline ndsec::MacAddress mac(std::mt19937_64& rng)
{
    ndsec::MacAddress m;
    for (auto& b : m.bytes) b = static_cast<std::uint8_t>(rng());
    return m;
}

inline ndsec::TargetMode mode(std::mt19937_64& rng)
{
    return rng() & 1 ? ndsec::TargetMode::hashed : ndsec::TargetMode::standard;
}

inline std::vector<std::uint8_t> public_value(std::mt19937_64& rng)
{
    // Mostly DH-sized values, occasionally tiny or empty.
    const std::size_t sizes[] = {0, 1, 2, 31, 255, 256, 257};
    std::vector<std::uint8_t> v(sizes[rng() % std::size(sizes)]);
    for (auto& b : v) b = static_cast<std::uint8_t>(rng());
    return v;
}

/// Uniform over the four variants and all their field values.
inline ndsec::NdpMessage message(std::mt19937_64& rng)
{
    switch (rng() % 4) {
    case 0: return ndsec::NeighborSolicitation{mode(rng), address(rng).bytes, mac(rng)};
    case 1: {
        ndsec::NeighborAdvertisement na;
        na.mode = mode(rng);
        na.router = rng() & 1;
        na.solicited = rng() & 1;
        na.override_flag = rng() & 1;
        na.target = address(rng).bytes;
        na.target_lla = mac(rng);
        return na;
    }
    case 2: return ndsec::KexInit{public_value(rng)};
    default: return ndsec::KexResp{public_value(rng)};
    }
}

}  // namespace gen
