#include <gtest/gtest.h>

#include <random>

#include "ndsec/dh_keyex.hpp"
#include "oracles.hpp"

using namespace ndsec;

TEST(DhGroup, NamedGroupsAreValid)
{
    EXPECT_NO_THROW(DhGroup::test_group().validate());
    const DhGroup g = DhGroup::modp2048();
    EXPECT_NO_THROW(g.validate());
    EXPECT_EQ(msb(g.prime_modulus) + 1, 2048u);
    EXPECT_EQ(g.generator, 2);
}

TEST(DhGroup, RejectsBadParameters)
{
    EXPECT_THROW((DhGroup{"", 3, 2}.validate()), ParameterError);    // too small
    EXPECT_THROW((DhGroup{"", 24, 5}.validate()), ParameterError);   // even
    EXPECT_THROW((DhGroup{"", 23, 1}.validate()), ParameterError);   // generator below range
    EXPECT_THROW((DhGroup{"", 23, 22}.validate()), ParameterError);  // generator = p-1
    EXPECT_THROW(generate_keypair(DhGroup{"", 23, 22}, 1), ParameterError);
    EXPECT_THROW(DhGroup::by_name("modp1024"), ParameterError);
}

TEST(DhKeyPair, ForcedExponentsMatchBruteForce)
{
    const DhGroup g = DhGroup::test_group();
    EXPECT_EQ(oracle::naive_modexp(5, 6, 23), 8u);
    EXPECT_EQ(oracle::naive_modexp(5, 15, 23), 19u);

    EXPECT_EQ(keypair_from_private(g, 6).public_value, 8);
    EXPECT_EQ(keypair_from_private(g, 15).public_value, 19);
}

TEST(DhKeyPair, RejectsExponentsOutsideRange)
{
    const DhGroup g = DhGroup::test_group();
    EXPECT_THROW(keypair_from_private(g, 1), ParameterError);
    EXPECT_THROW(keypair_from_private(g, 0), ParameterError);
    EXPECT_THROW(keypair_from_private(g, 22), ParameterError);
    // 5 is a primitive root mod 23, so 5^11 = 22 = p-1.
    EXPECT_EQ(oracle::naive_modexp(5, 11, 23), 22u);
    EXPECT_THROW(keypair_from_private(g, 11), ParameterError);
}

TEST(DhKeyPair, GenerationIsDeterministicPerSeed)
{
    for (const auto& g : {DhGroup::test_group(), DhGroup::modp2048()}) {
        EXPECT_EQ(generate_keypair(g, 42), generate_keypair(g, 42));
        EXPECT_NE(generate_keypair(g, 42).private_exponent, generate_keypair(g, 43).private_exponent);
    }
}

TEST(DhKeyPair, GeneratedValuesStayInRange)
{
    const DhGroup g = DhGroup::test_group();
    for (std::uint64_t seed = 0; seed < 500; ++seed) {
        auto kp = generate_keypair(g, seed);
        ASSERT_GE(kp.private_exponent, 2);
        ASSERT_LE(kp.private_exponent, 21);
        ASSERT_TRUE(g.acceptable_public(kp.public_value));
        ASSERT_EQ(kp.public_value,
                  oracle::naive_modexp(5, kp.private_exponent.convert_to<std::uint64_t>(), 23));
    }
}

TEST(DhKeyPair, Modp2048ExponentIsBounded)
{
    const DhGroup g = DhGroup::modp2048();
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto kp = generate_keypair(g, seed);
        EXPECT_LT(msb(kp.private_exponent), 256u);
        EXPECT_EQ(kp.public_value, oracle::square_multiply(g.generator, kp.private_exponent, g.prime_modulus));
    }
}

TEST(SharedSecret, KnownExample)
{
    const DhGroup g = DhGroup::test_group();
    auto a = keypair_from_private(g, 6);
    auto b = keypair_from_private(g, 15);
    EXPECT_EQ(oracle::naive_modexp(19, 6, 23), 2u);
    EXPECT_EQ(oracle::naive_modexp(8, 15, 23), 2u);
    EXPECT_EQ(compute_shared_secret(a, 19, g), 2);
    EXPECT_EQ(compute_shared_secret(b, 8, g), 2);
}

TEST(SharedSecret, RejectsDegeneratePeerValues)
{
    const DhGroup g = DhGroup::test_group();
    auto a = keypair_from_private(g, 6);
    for (int bad : {0, 1, 22, 23, 100}) EXPECT_THROW(compute_shared_secret(a, bad, g), SubgroupError) << bad;
}

TEST(SharedSecret, SymmetricOverSeededPairsInTestGroup)
{
    const DhGroup g = DhGroup::test_group();
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto a = generate_keypair(g, 2 * i);
        auto b = generate_keypair(g, 2 * i + 1);
        const BigInt ab = compute_shared_secret(a, b.public_value, g);
        ASSERT_EQ(ab, compute_shared_secret(b, a.public_value, g));
        const auto ea = a.private_exponent.convert_to<std::uint64_t>();
        const auto eb = b.private_exponent.convert_to<std::uint64_t>();
        ASSERT_EQ(ab, oracle::naive_modexp(5, ea * eb, 23));
        ASSERT_GE(ab, 0);
        ASSERT_LT(ab, 23);
    }
}

TEST(SharedSecret, SymmetricInModp2048AgainstIndependentExponentiation)
{
    const DhGroup g = DhGroup::modp2048();
    for (std::uint64_t i = 0; i < 3; ++i) {
        auto a = generate_keypair(g, 100 + i);
        auto b = generate_keypair(g, 200 + i);
        const BigInt s = compute_shared_secret(a, b.public_value, g);
        EXPECT_EQ(s, compute_shared_secret(b, a.public_value, g));
        EXPECT_EQ(s, oracle::square_multiply(b.public_value, a.private_exponent, g.prime_modulus));
    }
}

TEST(DeriveHmacKey, EncodingRule)
{
    EXPECT_EQ(to_bytes(0), std::vector<std::uint8_t>{0x00});
    EXPECT_EQ(to_bytes(2), std::vector<std::uint8_t>{0x02});
    EXPECT_EQ(to_bytes(256), (std::vector<std::uint8_t>{0x01, 0x00}));
    EXPECT_EQ(from_bytes(to_bytes(BigInt("123456789012345678901234567890"))), BigInt("123456789012345678901234567890"));
}

TEST(DeriveHmacKey, MatchesIndependentSha256)
{
    const std::uint8_t zero[] = {0x00};
    const std::uint8_t two[] = {0x02};
    const std::uint8_t two_five_six[] = {0x01, 0x00};
    EXPECT_EQ(derive_hmac_key(0), oracle::sha256(zero));
    EXPECT_EQ(derive_hmac_key(2), oracle::sha256(two));
    EXPECT_EQ(derive_hmac_key(256), oracle::sha256(two_five_six));
    // Frozen from an offline SHA-256 run.
    EXPECT_EQ(oracle::to_hex(derive_hmac_key(0)), "6e340b9cffb37a989ca544e6bb780a2c78901d3fb33738768511a30617afa01d");
    EXPECT_EQ(oracle::to_hex(derive_hmac_key(2)), "dbc1b4c900ffe48d575b5da5c638040125f65db0fe3e24494b76ea986457d986");
    EXPECT_EQ(oracle::to_hex(derive_hmac_key(256)),
              "47dc540c94ceb704a23875c11273e16bb0b8a87aed84de911f2133568115f254");
}
