#pragma once
#ifndef NDSEC_DH_KEYEX_HPP
#define NDSEC_DH_KEYEX_HPP

// Finite-field Diffie-Hellman and the derivation of pairwise HMAC keys.

#include <boost/multiprecision/cpp_int.hpp>

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "ndsec/address.hpp"
#include "ndsec/error.hpp"
#include "ndsec/sha256.hpp"

namespace ndsec {

using BigInt = boost::multiprecision::cpp_int;
using SecretKey = std::array<std::uint8_t, 32>;

struct DhGroup {
    std::string name;
    BigInt prime_modulus;
    BigInt generator;
    /// Upper bound on private exponent size in bits; 0 means the full range [2, p-2].
    unsigned exponent_bits = 0;

    /// RFC 3526 group 14 (2048-bit MODP) with 256-bit private exponents.
    static DhGroup modp2048()
    {
        static const BigInt p(
            "0xFFFFFFFFFFFFFFFFC90FDAA22168C234C4C6628B80DC1CD129024E088A67CC74020BBEA63B139B22514A08798E3404DD"
            "EF9519B3CD3A431B302B0A6DF25F14374FE1356D6D51C245E485B576625E7EC6F44C42E9A637ED6B0BFF5CB6F406B7EDEE3"
            "86BFB5A899FA5AE9F24117C4B1FE649286651ECE45B3DC2007CB8A163BF0598DA48361C55D39A69163FA8FD24CF5F83655D"
            "23DCA3AD961C62F356208552BB9ED529077096966D670C354E4ABC9804F1746C08CA18217C32905E462E36CE3BE39E772C1"
            "80E86039B2783A2EC07A28FB5C55DF06F4C52C9DE2BCBF6955817183995497CEA956AE515D2261898FA051015728E5A8AAC"
            "AA68FFFFFFFFFFFFFFFF");
        return DhGroup{"modp2048", p, 2, 256};
    }

    /// p = 23, g = 5. Only for tests.
    static DhGroup test_group() { return DhGroup{"test", 23, 5, 0}; }

    static DhGroup by_name(const std::string& name)
    {
        if (name == "modp2048") return modp2048();
        if (name == "test") return test_group();
        throw ParameterError("unknown DH group: " + name);
    }

    void validate() const
    {
        if (prime_modulus < 5) throw ParameterError("DH modulus must be >= 5");
        if (!bit_test(prime_modulus, 0)) throw ParameterError("DH modulus must be odd");
        if (generator < 2 || generator > prime_modulus - 2)
            throw ParameterError("DH generator must lie in [2, p-2]");
    }

    /// True for values a peer may legitimately send: [2, p-2].
    bool acceptable_public(const BigInt& v) const { return v >= 2 && v <= prime_modulus - 2; }
};

struct DhKeyPair {
    BigInt private_exponent;
    BigInt public_value;

    friend bool operator==(const DhKeyPair&, const DhKeyPair&) = default;
};

struct PairwiseKey {
    Ipv6Address peer_ip;
    SecretKey key_bytes{};

    friend bool operator==(const PairwiseKey&, const PairwiseKey&) = default;
};

/// Builds a keypair from an explicit exponent. Rejects exponents outside
/// [2, p-2] and exponents whose public value is degenerate.
inline DhKeyPair keypair_from_private(const DhGroup& group, const BigInt& private_exponent)
{
    group.validate();
    if (private_exponent < 2 || private_exponent > group.prime_modulus - 2)
        throw ParameterError("private exponent outside [2, p-2]");
    BigInt pub = powm(group.generator, private_exponent, group.prime_modulus);
    if (!group.acceptable_public(pub)) throw ParameterError("private exponent yields a degenerate public value");
    return DhKeyPair{private_exponent, pub};
}

namespace detail {

// Uniform in [0, bound) by rejection on bit-length draws.
inline BigInt random_below(const BigInt& bound, std::mt19937_64& rng)
{
    const unsigned bits = static_cast<unsigned>(msb(bound)) + 1;
    for (;;) {
        BigInt r = 0;
        unsigned have = 0;
        while (have < bits) {
            r <<= 64;
            r |= BigInt(rng());
            have += 64;
        }
        r >>= (have - bits);
        if (r < bound) return r;
    }
}

}  // namespace detail

/// Seeded, deterministic keypair. Degenerate results are redrawn from the same stream.
inline DhKeyPair generate_keypair(const DhGroup& group, std::uint64_t seed)
{
    group.validate();
    BigInt range = group.prime_modulus - 3;  // size of [2, p-2]
    if (group.exponent_bits != 0) {
        BigInt cap = BigInt(1) << group.exponent_bits;
        if (cap < range) range = cap;
    }
    std::mt19937_64 rng(seed);
    for (;;) {
        BigInt x = detail::random_below(range, rng) + 2;
        BigInt pub = powm(group.generator, x, group.prime_modulus);
        if (group.acceptable_public(pub)) return DhKeyPair{x, pub};
    }
}

inline BigInt compute_shared_secret(const DhKeyPair& own, const BigInt& peer_public, const DhGroup& group)
{
    if (!group.acceptable_public(peer_public))
        throw SubgroupError("peer public value outside [2, p-2]");
    return powm(peer_public, own.private_exponent, group.prime_modulus);
}

/// Minimal-length big-endian encoding; zero encodes as a single 0x00.
inline std::vector<std::uint8_t> to_bytes(const BigInt& v)
{
    if (v < 0) throw ParameterError("negative integer has no byte encoding");
    std::vector<std::uint8_t> out;
    export_bits(v, std::back_inserter(out), 8, true);
    if (out.empty()) out.push_back(0);
    return out;
}

inline BigInt from_bytes(std::span<const std::uint8_t> bytes)
{
    BigInt v = 0;
    if (!bytes.empty()) import_bits(v, bytes.begin(), bytes.end(), 8, true);
    return v;
}

/// SHA-256 over the minimal big-endian encoding of the shared secret.
inline SecretKey derive_hmac_key(const BigInt& shared_secret)
{
    auto enc = to_bytes(shared_secret);
    return Sha256::hash(enc);
}

}  // namespace ndsec

#endif  // NDSEC_DH_KEYEX_HPP
