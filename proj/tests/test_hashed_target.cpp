#include <gtest/gtest.h>

#include <random>
#include <set>

#include "ndsec/hashed_target.hpp"
#include "oracles.hpp"

using namespace ndsec;

namespace {

const SecretKey k_ab = derive_hmac_key(2);  // SHA-256(0x02)
const SecretKey k_zero = derive_hmac_key(0);
const Ipv6Address alice = Ipv6Address::from_string("fe80::1");
const Ipv6Address bob = Ipv6Address::from_string("fe80::2");

HashedTarget oracle_hash(const SecretKey& key, const Ipv6Address& a)
{
    auto full = oracle::hmac_sha256(key, a.bytes);
    HashedTarget h;
    std::copy_n(full.begin(), 16, h.bytes.begin());
    return h;
}

}  // namespace

TEST(HashTarget, FrozenValues)
{
    // Offline HMAC-SHA-256 with key SHA-256(0x02), truncated to 16 bytes.
    EXPECT_EQ(oracle::to_hex(hash_target(k_ab, alice).bytes), "5f6a95e56f9720fa7eeb820d1b430939");
    EXPECT_EQ(oracle::to_hex(hash_target(k_ab, bob).bytes), "6300fd627c63fc97e98f2598d26b3e0f");
    EXPECT_EQ(oracle::to_hex(hash_target(k_zero, bob).bytes), "69535151432d5bb10938e0b3054671e7");
}

TEST(HashTarget, Deterministic) { EXPECT_EQ(hash_target(k_ab, bob), hash_target(k_ab, bob)); }

TEST(HashTarget, TruncationMatchesOracleOnRandomSamples)
{
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        SecretKey key;
        for (auto& b : key) b = static_cast<std::uint8_t>(rng());
        Ipv6Address a;
        for (auto& b : a.bytes) b = static_cast<std::uint8_t>(rng());
        ASSERT_EQ(hash_target(key, a), oracle_hash(key, a));
    }
}

TEST(VerifyTarget, RoundTrip)
{
    EXPECT_TRUE(verify_target(k_ab, bob, hash_target(k_ab, bob)));
    EXPECT_TRUE(verify_target(k_zero, alice, hash_target(k_zero, alice)));
}

TEST(VerifyTarget, WrongAddressOrKeyFails)
{
    ASSERT_NE(hash_target(k_ab, alice), hash_target(k_ab, bob));
    EXPECT_FALSE(verify_target(k_ab, bob, hash_target(k_ab, alice)));
    ASSERT_NE(hash_target(k_ab, bob), hash_target(k_zero, bob));
    EXPECT_FALSE(verify_target(k_zero, bob, hash_target(k_ab, bob)));
}

TEST(VerifyTarget, ExactlyWhenEqualOverCorpus)
{
    const std::vector<SecretKey> keys = {k_ab, k_zero, derive_hmac_key(256), derive_hmac_key(19)};
    std::vector<Ipv6Address> addrs;
    for (std::uint64_t i = 1; i <= 6; ++i) addrs.push_back(Ipv6Address::link_local(i));

    std::vector<HashedTarget> all;
    for (const auto& k : keys)
        for (const auto& a : addrs) all.push_back(hash_target(k, a));

    for (const auto& k : keys)
        for (const auto& a : addrs)
            for (const auto& h : all) ASSERT_EQ(verify_target(k, a, h), h == hash_target(k, a));
}

TEST(VerifyTarget, SingleBitFlipAnywhereIsRejected)
{
    const HashedTarget good = hash_target(k_ab, bob);
    for (std::size_t byte = 0; byte < 16; ++byte) {
        for (int bit = 0; bit < 8; ++bit) {
            HashedTarget h = good;
            h.bytes[byte] ^= static_cast<std::uint8_t>(1u << bit);
            ASSERT_FALSE(verify_target(k_ab, bob, h));
        }
    }
}

TEST(PrecomputeSelfHashes, Cases)
{
    EXPECT_TRUE(precompute_self_hashes(bob, {}).empty());

    auto one = precompute_self_hashes(bob, {{alice, k_ab}});
    ASSERT_EQ(one.size(), 1u);
    EXPECT_TRUE(verify_target(k_ab, bob, one.at(alice)));

    const Ipv6Address carol = Ipv6Address::from_string("fe80::3");
    auto two = precompute_self_hashes(bob, {{alice, k_ab}, {carol, k_zero}});
    ASSERT_EQ(two.size(), 2u);
    EXPECT_NE(two.at(alice), two.at(carol));
    EXPECT_EQ(two.at(carol), hash_target(k_zero, bob));
}

TEST(KeySeparation, DistinctKeysGiveDistinctHashesOnCorpus)
{
    std::vector<SecretKey> keys;
    for (int s = 0; s < 64; ++s) keys.push_back(derive_hmac_key(s));
    for (std::uint64_t id = 1; id <= 4; ++id) {
        const auto addr = Ipv6Address::link_local(id);
        std::set<HashedTarget> seen;
        for (const auto& k : keys) seen.insert(hash_target(k, addr));
        EXPECT_EQ(seen.size(), keys.size());
    }
}
