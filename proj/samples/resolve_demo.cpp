// Alice resolves Bob on a three-host link, once with plain NDP and once with
// hashed targets, while an intruder answers every NS it sees.

#include <iostream>

#include "ndsec/ndsec.hpp"

using namespace ndsec;

static void run(TargetMode mode)
{
    Simulator sim;
    auto make = [&](const char* name, std::uint64_t id, std::uint64_t seed) {
        NodeConfig c;
        c.name = name;
        c.ip = Ipv6Address::link_local(id);
        c.mac = MacAddress{{0x02, 0, 0, 0, 0, static_cast<std::uint8_t>(id)}};
        c.mode = mode;
        c.dh_seed = seed;
        return sim.emplace<Node>(5, name, c);
    };
    auto alice = make("alice", 1, 11);
    auto bob = make("bob", 2, 22);

    AttackerConfig ac;
    ac.strategy = AttackStrategy::sniff_plaintext;
    auto intruder = sim.emplace<Adversary>(ac.latency, "intruder", ac);

    Node& a = sim.get<Node>(alice);
    Node& b = sim.get<Node>(bob);
    if (mode == TargetMode::hashed) {
        sim.send(alice, *a.start_key_exchange(b.ip()));
        sim.run();
    }
    auto ns = a.begin_resolution(b.ip(), sim.now());
    std::cout << "NS sent by alice (" << to_string(mode) << "):\n" << hex_dump(ns.payload);
    sim.send(alice, ns);
    sim.schedule_timer(alice, *a.next_deadline());
    sim.run();

    auto outcome = evaluate_attack(a, b.ip(), sim.get<Adversary>(intruder));
    std::cout << "alice caches " << b.ip() << " -> " << (outcome.victim_cached_mac ? outcome.victim_cached_mac->to_string() : "nothing")
              << (outcome.succeeded ? "  [spoofed]" : "  [genuine]") << "\n"
              << "frames sent on the link: " << sim.counters().total_frames << "\n\n";
}

int main()
{
    run(TargetMode::standard);
    run(TargetMode::hashed);
}
