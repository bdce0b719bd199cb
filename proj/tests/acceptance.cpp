// Acceptance checks. Prints one PASS/FAIL line per criterion; exit status is the number of failures.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include "generators.hpp"
#include "ndsec/ndsec.hpp"
#include "oracles.hpp"

using namespace ndsec;

namespace {

struct Check {
    bool ok = true;
    std::string why;

    void expect(bool cond, const std::string& what)
    {
        if (!cond && ok) why = what;
        ok = ok && cond;
    }
};

double seconds_of(const std::function<void()>& f)
{
    const auto t0 = std::chrono::steady_clock::now();
    f();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

ScenarioConfig scenario(Scenario s)
{
    ScenarioConfig c;
    c.scenario = s;
    c.node_count = 3;
    c.repetitions = 30;
    c.seed = 1;
    return c;
}

Check baseline_attack()
{
    Check c;
    auto cfg = scenario(Scenario::baseline_attack);
    ExperimentReport r;
    const double t = seconds_of([&] { r = run_scenario(cfg); });
    c.expect(cfg.attacker_latency < cfg.honest_latency, "intruder is not faster than bob");
    c.expect(r.aggregate.at(0).attack_success_rate == 1.0, "success rate != 1.0");
    for (const auto& rep : r.repetitions) {
        const auto& run = rep.runs.at(0);
        c.expect(run.attack && run.attack->victim_cached_mac == AttackerConfig{}.own_mac,
                 "alice does not map bob to the intruder MAC in rep " + std::to_string(rep.index));
    }
    c.expect(r.repetitions.size() == 30, "wrong repetition count");
    c.expect(t < 1.0, "runtime " + std::to_string(t) + " s");
    if (c.ok) c.why = "30/30 reps, " + std::to_string(t) + " s";
    return c;
}

Check proposal_guess()
{
    Check c;
    auto cfg = scenario(Scenario::proposal_attack_guess);  // modp2048, eager exchange
    ExperimentReport r;
    const double t = seconds_of([&] { r = run_scenario(cfg); });
    c.expect(cfg.pool_size >= 8 && !cfg.pool_includes_target, "pool too small or holds the target");
    c.expect(r.aggregate.at(0).attack_success_rate == 0.0, "success rate != 0.0");
    c.expect(r.aggregate.at(0).forged_accepted == 0.0, "forged NA accepted");
    c.expect(r.aggregate.at(0).resolution_rate == 1.0, "bob not resolved");
    for (const auto& rep : r.repetitions)
        c.expect(rep.runs.at(0).attack->forged_frames_sent == 40, "expected 8 x 5 forged frames");
    c.expect(t < 1.0, "runtime " + std::to_string(t) + " s");
    if (c.ok) c.why = "0/30 reps, " + std::to_string(t) + " s";
    return c;
}

Check hiding_on_wire()
{
    Check c;
    std::uint64_t checked = 0;
    for (auto s : {Scenario::proposal_resolution, Scenario::proposal_attack_guess, Scenario::proposal_attack_reflect,
                   Scenario::overhead_compare}) {
        for (std::size_t n : {3u, 5u}) {
            auto cfg = scenario(s);
            cfg.group = "test";
            cfg.node_count = n;
            cfg.repetitions = 10;
            for (const auto& rep : run_scenario(cfg).repetitions)
                for (const auto& run : rep.runs) {
                    if (run.mode != TargetMode::hashed) continue;
                    checked += run.hashed_ns_checked;
                    c.expect(run.hashed_ns_checked > 0, "hashed run without an audited NS");
                    c.expect(run.hashed_ns_violations == 0, "NS target is not hash_target(key, target)");
                }
        }
    }
    if (c.ok) c.why = std::to_string(checked) + " hashed NS frames audited";
    return c;
}

Check overhead()
{
    Check c;
    auto cfg = scenario(Scenario::overhead_compare);
    cfg.repetitions = 5;
    const auto r = run_scenario(cfg);
    const auto& base = r.aggregate.at(0);
    const auto& prop = r.aggregate.at(1);
    c.expect(prop.total_frames == base.total_frames + 6, "proposal != baseline + 6 frames");
    c.expect(r.ratios.at("alice_frames_out") == 3.0, "alice frames_out ratio != 3.0");
    for (const auto& rep : r.repetitions)
        c.expect(rep.runs[1].counters.total_frames == rep.runs[0].counters.total_frames + 6, "per-rep mismatch");
    if (c.ok)
        c.why = "frames " + detail::num(base.total_frames) + " -> " + detail::num(prop.total_frames) +
                ", alice out ratio " + detail::num(r.ratios.at("alice_frames_out"));
    return c;
}

Check dh()
{
    Check c;
    const DhGroup g = DhGroup::test_group();
    for (std::uint64_t i = 0; i < 200; ++i) {
        auto a = generate_keypair(g, 2 * i);
        auto b = generate_keypair(g, 2 * i + 1);
        const auto ab = compute_shared_secret(a, b.public_value, g);
        c.expect(ab == compute_shared_secret(b, a.public_value, g), "asymmetric shared secret");
        c.expect(ab == oracle::naive_modexp(5, a.private_exponent.convert_to<std::uint64_t>() *
                                                   b.private_exponent.convert_to<std::uint64_t>(),
                                            23),
                 "shared secret disagrees with oracle");
    }
    auto a = keypair_from_private(g, 6);
    auto b = keypair_from_private(g, 15);
    c.expect(a.public_value == oracle::naive_modexp(5, 6, 23), "public value of 6");
    c.expect(b.public_value == oracle::naive_modexp(5, 15, 23), "public value of 15");
    const auto s = compute_shared_secret(a, b.public_value, g);
    c.expect(s == 2 && compute_shared_secret(b, a.public_value, g) == 2, "known example secret != 2");
    const std::uint8_t two[] = {0x02};
    c.expect(derive_hmac_key(s) == oracle::sha256(two), "key != SHA-256(0x02)");
    if (c.ok) c.why = "200 pairs symmetric, known example secret 2";
    return c;
}

Check hmac()
{
    Check c;
    auto bytes = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };
    struct V {
        std::vector<std::uint8_t> key, data;
        std::string mac;
    };
    const std::vector<V> vectors = {
        {std::vector<std::uint8_t>(20, 0x0b), bytes("Hi There"),
         "b0344c61d8db38535ca8afceaf0bf12b881dc200c9833da726e9376c2e32cff7"},
        {bytes("Jefe"), bytes("what do ya want for nothing?"),
         "5bdcc146bf60754e6a042426089575c75a003f089d2739839dec58b964ec3843"},
        {std::vector<std::uint8_t>(20, 0xaa), std::vector<std::uint8_t>(50, 0xdd),
         "773ea91e36800e46854db8ebd09181a72959098b3ef8c122d9635514ced565fe"},
        {oracle::from_hex("0102030405060708090a0b0c0d0e0f10111213141516171819"), std::vector<std::uint8_t>(50, 0xcd),
         "82558a389a443c0ea4cc819899f2083a85f0faa3e578f8077a2e3ff46729665b"},
        {std::vector<std::uint8_t>(20, 0x0c), bytes("Test With Truncation"), "a3b6167473100ee06e0c796c2955552b"},
        {std::vector<std::uint8_t>(131, 0xaa), bytes("Test Using Larger Than Block-Size Key - Hash Key First"),
         "60e431591ee0b67f0d8a26aacbf5b77f8e0bc6213728c5140546040f0ee37f54"},
        {std::vector<std::uint8_t>(131, 0xaa),
         bytes("This is a test using a larger than block-size key and a larger than block-size data. The key needs "
               "to be hashed before being used by the HMAC algorithm."),
         "9b09ffa71b942fcb27635fbcd5b0e944bfdc63644f0713938a7f51535c3a35e2"},
    };
    for (const auto& v : vectors) {
        const auto got = oracle::to_hex(hmac_sha256(v.key, v.data));
        c.expect(got.substr(0, v.mac.size()) == v.mac, "RFC 4231 vector mismatch");
    }
    std::mt19937_64 rng(4231);
    for (int i = 0; i < 2000; ++i) {
        SecretKey key;
        for (auto& b : key) b = static_cast<std::uint8_t>(rng());
        const auto addr = gen::address(rng);
        const auto full = oracle::hmac_sha256(key, addr.bytes);
        const auto h = hash_target(key, addr);
        c.expect(std::equal(h.bytes.begin(), h.bytes.end(), full.begin()), "truncation mismatch");
    }
    if (c.ok) c.why = "7 RFC vectors, 2000 truncation samples";
    return c;
}

Check codec()
{
    Check c;
    std::mt19937_64 rng(7);
    for (int i = 0; i < 2000; ++i) {
        const auto m = gen::message(rng);
        const auto src = gen::address(rng), dst = gen::address(rng);
        const auto wire = encode(m, src, dst);
        c.expect(decode(wire, src, dst) == m, "round trip mismatch");
        c.expect(oracle::ones_sum_with_checksum(src, dst, wire) == 0xffff, "checksum sum != 0xFFFF");
    }
    std::size_t classified = 0;
    for (int i = 0; i < 20000; ++i) {
        auto bytes = oracle::random_bytes(rng, rng() % 2049);
        try {
            decode(bytes, gen::address(rng), gen::address(rng));
        } catch (const CodecError&) {
        }
        ++classified;
    }
    c.expect(classified == 20000, "random input not classified");
    if (c.ok) c.why = "2000 round trips, 20000 random inputs";
    return c;
}

Check determinism()
{
    Check c;
    for (auto s : {Scenario::baseline_resolution, Scenario::proposal_resolution, Scenario::baseline_attack,
                   Scenario::proposal_attack_guess, Scenario::proposal_attack_reflect, Scenario::overhead_compare}) {
        auto cfg = scenario(s);
        cfg.group = "test";
        cfg.repetitions = 8;
        const auto a = report_to_json_string(run_scenario(cfg));
        cfg.threads = 1;
        const auto b = report_to_json_string(run_scenario(cfg));
        c.expect(a == b, std::string("JSON differs for ") + to_string(s));
    }
    if (c.ok) c.why = "6 scenarios byte-identical";
    return c;
}

Check reflect()
{
    Check c;
    auto cfg = scenario(Scenario::proposal_attack_reflect);
    cfg.group = "test";
    const auto r = run_scenario(cfg);
    c.expect(r.aggregate.at(0).attack_success_rate == 1.0, "reflect success rate != 1.0");
    c.expect(r.out_of_model, "report not labelled out-of-model");
    c.expect(!r.note.empty(), "missing note");
    if (c.ok) c.why = "rate 1.0, out_of_model";
    return c;
}

}  // namespace

int main()
{
    const std::pair<const char*, std::function<Check()>> criteria[] = {
        {"AC1 baseline attack reproduction", baseline_attack},
        {"AC2 proposal resists guessing", proposal_guess},
        {"AC3 hashed target on the wire", hiding_on_wire},
        {"AC4 overhead decomposition", overhead},
        {"AC5 DH correctness", dh},
        {"AC6 HMAC correctness", hmac},
        {"AC7 codec robustness", codec},
        {"AC8 determinism", determinism},
        {"AC9 reflection limitation", reflect},
    };
    int failures = 0;
    for (const auto& [name, fn] : criteria) {
        Check c;
        try {
            c = fn();
        } catch (const std::exception& e) {
            c.ok = false;
            c.why = std::string("exception: ") + e.what();
        }
        std::printf("%s %s (%s)\n", c.ok ? "PASS" : "FAIL", name, c.why.c_str());
        failures += c.ok ? 0 : 1;
    }
    return failures;
}
