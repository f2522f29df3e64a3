#include <doctest.h>

#include <random>
#include <set>
#include <stdexcept>

#include "obs/assembly.hpp"
#include "oracles/assembly_oracle.hpp"

using namespace obs;

namespace {

Packet pkt(PacketId id, Bytes len, SimTime at, std::size_t cls = 0, std::uint32_t dest = 1) {
    return Packet{id, len, cls, NodeId{0}, NodeId{dest}, at};
}

std::vector<Bytes> sizes(const Batch& b) {
    std::vector<Bytes> out;
    for (const auto& p : b.packets) out.push_back(p.length);
    return out;
}

constexpr SimTime us(std::int64_t v) { return SimTime{v}; }

}  // namespace

TEST_CASE("algorithm names") {
    for (auto a : {Algorithm::FAP, Algorithm::FAS, Algorithm::MSMAP, Algorithm::AAS, Algorithm::PriorityAAS}) {
        CHECK(parse_algorithm(to_string(a)) == a);
    }
    CHECK_FALSE(parse_algorithm("fap"));
}

TEST_CASE("FAP") {
    FapQueue q(us(100));

    SUBCASE("arrivals at 0, 40, 80 close one burst at 100") {
        CHECK(q.on_packet(pkt(1, 100, us(0)), us(0)).empty());
        CHECK(q.deadline() == us(100));
        CHECK(q.on_packet(pkt(2, 100, us(40)), us(40)).empty());
        CHECK(q.on_packet(pkt(3, 100, us(80)), us(80)).empty());
        auto out = q.on_timer(us(100));
        REQUIRE(out.size() == 1);
        CHECK(out[0].emitted_at == us(100));
        CHECK(out[0].packets.size() == 3);
        CHECK(out[0].trigger == Trigger::Timer);
        CHECK_FALSE(q.deadline());

        SUBCASE("the next epoch starts at the next arrival") {
            q.on_packet(pkt(4, 100, us(120)), us(120));
            auto next = q.on_timer(us(220));
            REQUIRE(next.size() == 1);
            CHECK(next[0].emitted_at == us(220));
            CHECK(next[0].packets.size() == 1);
        }
    }
    SUBCASE("timer on an empty queue is a no-op") {
        CHECK(q.on_timer(us(500)).empty());
    }
    SUBCASE("saturated arrivals give gaps of exactly the period") {
        std::vector<SimTime> emitted;
        for (std::int64_t t = 0; t < 2000; ++t) {
            for (auto& b : q.on_packet(pkt(static_cast<PacketId>(t), 50, us(t)), us(t))) emitted.push_back(b.emitted_at);
        }
        REQUIRE(emitted.size() >= 19);
        for (std::size_t i = 1; i < emitted.size(); ++i) CHECK(emitted[i] - emitted[i - 1] == us(100));
    }
}

TEST_CASE("FAS") {
    FasQueue q(1000);

    SUBCASE("400, 400, 400 emits 800 on the third arrival") {
        CHECK(q.on_packet(pkt(1, 400, us(0)), us(0)).empty());
        CHECK(q.on_packet(pkt(2, 400, us(1)), us(1)).empty());
        auto out = q.on_packet(pkt(3, 400, us(2)), us(2));
        REQUIRE(out.size() == 1);
        CHECK(out[0].bytes == 800);
        CHECK(sizes(out[0]) == std::vector<Bytes>{400, 400});
        CHECK(q.queue().bytes() == 400);
        CHECK(q.queue().packets().front().id == 3);
    }
    SUBCASE("a lone small packet waits forever") {
        CHECK(q.on_packet(pkt(1, 100, us(0)), us(0)).empty());
        CHECK(q.on_timer(us(1'000'000)).empty());
        CHECK_FALSE(q.deadline());
        CHECK(q.queue().size() == 1);
    }
    SUBCASE("an oversize packet leaves alone at once") {
        auto out = q.on_packet(pkt(1, 1500, us(5)), us(5));
        REQUIRE(out.size() == 1);
        CHECK(out[0].bytes == 1500);
        CHECK(out[0].emitted_at == us(5));
        CHECK(out[0].trigger == Trigger::Oversize);
        CHECK(q.queue().empty());
    }
    SUBCASE("an oversize packet behind a partial queue flushes the queue first") {
        q.on_packet(pkt(1, 300, us(0)), us(0));
        auto out = q.on_packet(pkt(2, 1500, us(3)), us(3));
        REQUIRE(out.size() == 2);
        CHECK(out[0].bytes == 300);
        CHECK(out[1].bytes == 1500);
    }
    SUBCASE("exactly reaching the threshold does not emit") {
        q.on_packet(pkt(1, 600, us(0)), us(0));
        CHECK(q.on_packet(pkt(2, 400, us(1)), us(1)).empty());
        CHECK(q.queue().bytes() == 1000);
    }
}

TEST_CASE("MSMAP") {
    MsmapQueue q(1000, us(100));

    SUBCASE("time trigger") {
        q.on_packet(pkt(1, 400, us(0)), us(0));
        q.on_packet(pkt(2, 400, us(30)), us(30));
        auto out = q.on_timer(us(100));
        REQUIRE(out.size() == 1);
        CHECK(out[0].emitted_at == us(100));
        CHECK(sizes(out[0]) == std::vector<Bytes>{400, 400});
    }
    SUBCASE("size trigger restarts the timer at the newcomer") {
        q.on_packet(pkt(1, 600, us(0)), us(0));
        auto out = q.on_packet(pkt(2, 600, us(20)), us(20));
        REQUIRE(out.size() == 1);
        CHECK(out[0].emitted_at == us(20));
        CHECK(sizes(out[0]) == std::vector<Bytes>{600});
        CHECK(q.queue().bytes() == 600);
        CHECK(q.deadline() == us(120));
        CHECK(q.on_timer(us(100)).empty());
    }
    SUBCASE("timer wins a tie with an arrival") {
        q.on_packet(pkt(1, 600, us(0)), us(0));
        auto out = q.on_packet(pkt(2, 600, us(100)), us(100));
        REQUIRE(out.size() == 1);
        CHECK(out[0].trigger == Trigger::Timer);
        CHECK(out[0].emitted_at == us(100));
        CHECK(sizes(out[0]) == std::vector<Bytes>{600});
        CHECK(q.queue().bytes() == 600);
        CHECK(q.deadline() == us(200));
    }
    SUBCASE("timer fired first by the driver gives the same result") {
        q.on_packet(pkt(1, 600, us(0)), us(0));
        auto first = q.on_timer(us(100));
        auto second = q.on_packet(pkt(2, 600, us(100)), us(100));
        REQUIRE(first.size() == 1);
        CHECK(second.empty());
        CHECK(q.deadline() == us(200));
    }
}

TEST_CASE("AAS window") {
    AasConfig cfg;
    cfg.q_min = 500;
    cfg.q_max = 5000;
    cfg.a = 1.0;
    cfg.delta_a = 200;

    CHECK(initial_window(cfg) == AasWindow{500, 700});

    AasConfig slide = cfg;
    slide.delta_a = 100;
    slide.a = 2.0;
    SUBCASE("reaching q_high slides up") { CHECK(update_window({700, 900}, slide, 900) == AasWindow{800, 1000}); }
    SUBCASE("in between holds") { CHECK(update_window({700, 900}, slide, 800) == AasWindow{700, 900}); }
    SUBCASE("at or below q_low slides down") { CHECK(update_window({700, 900}, slide, 700) == AasWindow{600, 800}); }
    SUBCASE("floor clamp") { CHECK(update_window({500, 700}, cfg, 400) == AasWindow{500, 700}); }
    SUBCASE("ceiling clamp keeps the width") {
        CHECK(update_window({4800, 5000}, cfg, 5000) == AasWindow{4800, 5000});
        CHECK(update_window({4700, 4900}, cfg, 4900) == AasWindow{4800, 5000});
    }
}

TEST_CASE("AAS queue") {
    AasConfig cfg;
    cfg.q_min = 500;
    cfg.q_max = 5000;
    cfg.a = 1.0;
    cfg.delta_a = 200;
    cfg.max_period = us(200);
    AasQueue q(cfg);
    REQUIRE(q.window() == AasWindow{500, 700});

    SUBCASE("threshold rule against q_high") {
        q.on_packet(pkt(1, 300, us(0)), us(0));
        q.on_packet(pkt(2, 300, us(50)), us(50));
        auto out = q.on_packet(pkt(3, 300, us(80)), us(80));
        REQUIRE(out.size() == 1);
        CHECK(out[0].bytes == 600);
        CHECK(out[0].emitted_at == us(80));
        // 600 is strictly inside (500, 700): the window holds.
        CHECK(q.window() == AasWindow{500, 700});
    }
    SUBCASE("max period guarantee") {
        q.on_packet(pkt(1, 100, us(0)), us(0));
        auto out = q.on_timer(us(200));
        REQUIRE(out.size() == 1);
        CHECK(out[0].bytes == 100);
        CHECK(out[0].emitted_at == us(200));
    }
    SUBCASE("a full burst slides the window up and raises the threshold") {
        auto out = q.on_packet(pkt(1, 700, us(0)), us(0));
        CHECK(out.empty());
        out = q.on_packet(pkt(2, 10, us(1)), us(1));
        REQUIRE(out.size() == 1);
        CHECK(out[0].bytes == 700);
        CHECK(q.window() == AasWindow{700, 900});
        CHECK(q.on_packet(pkt(3, 800, us(2)), us(2)).empty());
        CHECK(q.queue().bytes() == 810);
    }
}

TEST_CASE("priority queues") {
    AssemblerConfig cfg;
    cfg.algorithm = Algorithm::PriorityAAS;
    cfg.priority.m_destinations = 2;
    cfg.priority.l_max = {1000, 1000};
    cfg.priority.t_max = {us(200), us(300)};
    cfg.priority.offset = {us(0), us(25)};
    BurstId ids = 0;
    EdgeAssembler edge(NodeId{0}, cfg, &ids);

    SUBCASE("step 1: overflow emits the queue; the newcomer restarts it") {
        CHECK(edge.on_packet(pkt(1, 600, us(0), 0, 1), us(0)).bursts.empty());
        auto out = edge.on_packet(pkt(2, 500, us(50), 0, 1), us(50));
        REQUIRE(out.bursts.size() == 1);
        CHECK(out.bursts[0].total_bytes == 600);
        CHECK(out.bursts[0].class_index == 0);
        CHECK(out.next_deadline == us(250));
        CHECK(edge.queued_packets() == 1);
    }
    SUBCASE("distinct (class, dest) pairs never share a queue") {
        CHECK(edge.on_packet(pkt(1, 600, us(0), 0, 1), us(0)).bursts.empty());
        CHECK(edge.on_packet(pkt(2, 600, us(0), 1, 1), us(0)).bursts.empty());
        CHECK(edge.on_packet(pkt(3, 600, us(0), 0, 2), us(0)).bursts.empty());
        CHECK(edge.queues().size() == 3);
    }
    SUBCASE("300 x 4 emits 900 on the fourth") {
        for (int i = 0; i < 3; ++i) CHECK(edge.on_packet(pkt(i, 300, us(10 * i), 0, 1), us(10 * i)).bursts.empty());
        auto out = edge.on_packet(pkt(3, 300, us(30), 0, 1), us(30));
        REQUIRE(out.bursts.size() == 1);
        CHECK(out.bursts[0].total_bytes == 900);
        CHECK(out.bursts[0].packets.size() == 3);
    }
    SUBCASE("step 2: timer fires at T_max") {
        edge.on_packet(pkt(1, 300, us(0), 0, 1), us(0));
        QueueKey key{0, NodeId{1}};
        CHECK(edge.on_timer(key, us(199)).bursts.empty());
        auto out = edge.on_timer(key, us(200));
        REQUIRE(out.bursts.size() == 1);
        CHECK(out.bursts[0].assembled_at == us(200));
        CHECK_FALSE(out.next_deadline);
        CHECK(edge.queued_packets() == 0);
    }
    SUBCASE("stale timer after a size trigger is a no-op") {
        QueueKey key{0, NodeId{1}};
        edge.on_packet(pkt(1, 600, us(0), 0, 1), us(0));
        edge.on_packet(pkt(2, 600, us(50), 0, 1), us(50));
        CHECK(edge.on_timer(key, us(200)).bursts.empty());
        CHECK(edge.deadline(key) == us(250));
        CHECK(edge.on_timer(key, us(250)).bursts.size() == 1);
    }
    SUBCASE("shorter T_max closes first") {
        edge.on_packet(pkt(1, 100, us(0), 0, 1), us(0));
        edge.on_packet(pkt(2, 100, us(0), 1, 1), us(0));
        CHECK(edge.deadline({0, NodeId{1}}) == us(200));
        CHECK(edge.deadline({1, NodeId{1}}) == us(300));
        auto c1 = edge.on_timer({0, NodeId{1}}, us(200));
        auto c2 = edge.on_timer({1, NodeId{1}}, us(300));
        REQUIRE(c1.bursts.size() == 1);
        REQUIRE(c2.bursts.size() == 1);
        CHECK(c2.bursts[0].class_index == 1);
    }
    SUBCASE("class outside the table is rejected") {
        CHECK_THROWS_AS(edge.on_packet(pkt(1, 100, us(0), 5, 1), us(0)), std::out_of_range);
    }
}

TEST_CASE("burst ids come from the shared counter") {
    AssemblerConfig cfg;
    cfg.algorithm = Algorithm::FAS;
    cfg.size_threshold = 100;
    BurstId ids = 40;
    EdgeAssembler a(NodeId{0}, cfg, &ids);
    EdgeAssembler b(NodeId{1}, cfg, &ids);
    auto x = a.on_packet(pkt(1, 500, us(0)), us(0));
    auto y = b.on_packet(pkt(2, 500, us(0)), us(0));
    CHECK(x.bursts.at(0).burst_id == 40);
    CHECK(y.bursts.at(0).burst_id == 41);
    CHECK(y.bursts.at(0).source == NodeId{1});
}

TEST_CASE("config validation") {
    AssemblerConfig c;
    CHECK(c.validate().empty());
    c.period_threshold = us(0);
    CHECK_FALSE(c.validate().empty());
    c = {};
    c.algorithm = Algorithm::AAS;
    c.aas.q_max = c.aas.q_min;
    CHECK_FALSE(c.validate().empty());
    c = {};
    c.algorithm = Algorithm::PriorityAAS;
    c.priority.t_max = {us(10), us(20)};
    CHECK_FALSE(c.validate().empty());
}

// --- properties over random traces ---

TEST_CASE("property: library assembler equals the tick interpreter") {
    std::mt19937_64 rng(2024);
    for (auto alg : {Algorithm::FAP, Algorithm::FAS, Algorithm::MSMAP, Algorithm::AAS, Algorithm::PriorityAAS}) {
        for (int i = 0; i < 60; ++i) {
            auto tr = oracle::random_trace(alg, rng, 300);
            REQUIRE(tr.cfg.validate().empty());
            auto want = oracle::interpret(tr.cfg, tr.arrivals, tr.until);
            auto got = oracle::drive(tr.cfg, tr.arrivals, tr.until);
            INFO(to_string(alg) << " trace " << i);
            CHECK(got.emissions == want.emissions);
            CHECK(got.leftover == want.leftover);
        }
    }
}

TEST_CASE("property: conservation, order and size bounds") {
    std::mt19937_64 rng(99);
    for (auto alg : {Algorithm::FAP, Algorithm::FAS, Algorithm::MSMAP, Algorithm::AAS, Algorithm::PriorityAAS}) {
        for (int i = 0; i < 40; ++i) {
            auto tr = oracle::random_trace(alg, rng, 400);
            BurstId ids = 0;
            EdgeAssembler edge(NodeId{0}, tr.cfg, &ids);
            std::vector<Burst> bursts;
            std::map<std::pair<std::size_t, std::uint32_t>, std::optional<SimTime>> armed;

            auto fire = [&](SimTime t) {
                for (auto& [key, deadline] : armed) {
                    if (deadline && *deadline <= t) {
                        auto out = edge.on_timer({key.first, NodeId{key.second}}, *deadline);
                        deadline = out.next_deadline;
                        for (auto& b : out.bursts) bursts.push_back(std::move(b));
                    }
                }
            };
            for (const auto& a : tr.arrivals) {
                fire(SimTime{a.at});
                Packet p{a.id, a.length, a.cls, NodeId{0}, NodeId{a.dest}, SimTime{a.at}};
                auto out = edge.on_packet(p, SimTime{a.at});
                armed[{a.cls, a.dest}] = out.next_deadline;
                for (auto& b : out.bursts) {
                    bursts.push_back(std::move(b));
                }
            }
            fire(SimTime{tr.until});

            std::set<PacketId> seen;
            for (const auto& b : bursts) {
                REQUIRE_FALSE(b.packets.empty());
                Bytes sum = 0;
                for (std::size_t k = 0; k < b.packets.size(); ++k) {
                    sum += b.packets[k].length;
                    CHECK(seen.insert(b.packets[k].id).second);
                    CHECK(b.packets[k].dest == b.dest);
                    CHECK(b.packets[k].class_index == b.class_index);
                    if (k > 0) CHECK(b.packets[k - 1].id < b.packets[k].id);
                }
                CHECK(sum == b.total_bytes);
                if (alg == Algorithm::AAS) {
                    for (const auto& p : b.packets) CHECK(b.assembled_at - p.created_at <= tr.cfg.aas.max_period);
                }
            }
            for (const auto& p : edge.queued()) CHECK(seen.insert(p.id).second);
            CHECK(seen.size() == tr.arrivals.size());
        }
    }
}

TEST_CASE("property: AAS window stays inside [q_min, q_max]") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
        auto tr = oracle::random_trace(Algorithm::AAS, rng, 300);
        AasQueue q(tr.cfg.aas);
        const Bytes width = tr.cfg.aas.width();
        for (const auto& a : tr.arrivals) {
            q.on_timer(SimTime{a.at});
            q.on_packet(Packet{a.id, a.length, 0, NodeId{0}, NodeId{1}, SimTime{a.at}}, SimTime{a.at});
            const auto& w = q.window();
            CHECK(tr.cfg.aas.q_min <= w.q_low);
            CHECK(w.q_low < w.q_high);
            CHECK(w.q_high <= tr.cfg.aas.q_max);
            CHECK(w.q_high - w.q_low == width);
        }
    }
}

TEST_CASE("property: size-triggered bursts respect the threshold") {
    std::mt19937_64 rng(31);
    auto check = [](const std::vector<Batch>& out, const Packet& p, Bytes limit) {
        for (const auto& b : out) {
            if (b.trigger != Trigger::Size) continue;
            CHECK(b.bytes <= limit);
            CHECK(b.bytes + p.length > limit);
        }
    };
    for (int i = 0; i < 100; ++i) {
        auto tr = oracle::random_trace(Algorithm::MSMAP, rng, 400);
        FasQueue fas(tr.cfg.size_threshold);
        MsmapQueue msmap(tr.cfg.size_threshold, tr.cfg.period_threshold);
        AasQueue aas(tr.cfg.aas);
        for (const auto& a : tr.arrivals) {
            Packet p{a.id, a.length, 0, NodeId{0}, NodeId{1}, SimTime{a.at}};
            check(fas.on_packet(p, p.created_at), p, tr.cfg.size_threshold);
            check(msmap.on_packet(p, p.created_at), p, tr.cfg.size_threshold);
            aas.on_timer(p.created_at);
            Bytes limit = aas.window().q_high;
            check(aas.on_packet(p, p.created_at), p, limit);
        }
    }
}
