#pragma once
#ifndef NDSEC_HASHED_TARGET_HPP
#define NDSEC_HASHED_TARGET_HPP

#include <algorithm>
#include <map>

#include "ndsec/address.hpp"
#include "ndsec/dh_keyex.hpp"
#include "ndsec/sha256.hpp"

namespace ndsec {

/// Leftmost 16 bytes of HMAC-SHA-256(key, target). Occupies the Target
/// field of hashed-mode NS/NA in place of the plaintext address.
struct HashedTarget {
    Bytes16 bytes{};

    friend auto operator<=>(const HashedTarget&, const HashedTarget&) = default;
};

inline HashedTarget hash_target(const SecretKey& key, const Ipv6Address& target)
{
    Digest mac = hmac_sha256(key, target.bytes);
    HashedTarget h;
    std::copy_n(mac.begin(), h.bytes.size(), h.bytes.begin());
    return h;
}

/// Compares all 16 bytes regardless of where the first mismatch is.
inline bool constant_time_equal(const Bytes16& a, const Bytes16& b)
{
    volatile std::uint8_t diff = 0;
    for (std::size_t i = 0; i < a.size(); ++i) diff = diff | (a[i] ^ b[i]);
    return diff == 0;
}

inline bool verify_target(const SecretKey& key, const Ipv6Address& own_address, const HashedTarget& received)
{
    return constant_time_equal(hash_target(key, own_address).bytes, received.bytes);
}

inline std::map<Ipv6Address, HashedTarget> precompute_self_hashes(const Ipv6Address& own_address,
                                                                  const std::map<Ipv6Address, SecretKey>& key_table)
{
    std::map<Ipv6Address, HashedTarget> out;
    for (const auto& [peer, key] : key_table) out.emplace(peer, hash_target(key, own_address));
    return out;
}

}  // namespace ndsec

#endif  // NDSEC_HASHED_TARGET_HPP
