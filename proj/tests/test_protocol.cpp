#include <doctest.h>

#include <random>
#include <set>

#include "obs/protocol.hpp"
#include "oracles/path_oracle.hpp"

using namespace obs;

namespace {

struct Fig1 {
    Topology t = figure1_topology();
    NodeId n(const char* name) const { return t.node(name); }
    std::vector<NodeId> r(std::initializer_list<const char*> names) const {
        std::vector<NodeId> out;
        for (auto x : names) out.push_back(t.node(x));
        return out;
    }
    BurstHeader header_at(const char* holder) const {
        BurstHeader h;
        h.burst_id = 7;
        h.successor = n(holder);
        h.optimum_route = r({"N1", "N6", "N10"});
        h.on_optimum = true;
        return h;
    }
};

const BurstHeader& next_header(const HeaderAction& a) {
    if (auto f = std::get_if<Forward>(&a)) return f->header;
    if (auto r = std::get_if<Reroute>(&a)) return r->header;
    FAIL("expected forward or reroute, got " << action_name(a));
    static BurstHeader none;
    return none;
}

}  // namespace

TEST_CASE("header rules on figure1") {
    Fig1 f;
    ProtocolConfig cfg;
    NodeProtocolState n6{f.n("N6"), {}, {}};

    SUBCASE("flag 1, all links up: forward along the optimum") {
        auto a = process_header(n6, f.header_at("N6"), f.t, cfg);
        REQUIRE(std::holds_alternative<Forward>(a));
        const auto& h = std::get<Forward>(a).header;
        CHECK(h.successor == f.n("N10"));
        CHECK(h.on_optimum);
        CHECK(h.bypass_route.empty());
    }

    SUBCASE("suspected N6-N10: reroute, then toggle at N5, then terminate") {
        n6.known_down_links.insert(make_link_key(f.n("N6"), f.n("N10")));
        auto a = process_header(n6, f.header_at("N6"), f.t, cfg);
        REQUIRE(std::holds_alternative<Reroute>(a));
        auto h = std::get<Reroute>(a).header;
        CHECK_FALSE(h.on_optimum);
        CHECK(h.bypass_route == f.r({"N6", "N7", "N5", "N10"}));
        CHECK(h.successor == f.n("N7"));
        CHECK(h.optimum_route == f.r({"N1", "N6", "N10"}));

        auto at7 = process_header(NodeProtocolState{f.n("N7"), {}, {}}, h, f.t, cfg);
        REQUIRE(std::holds_alternative<Forward>(at7));
        h = std::get<Forward>(at7).header;
        CHECK(h.successor == f.n("N5"));
        CHECK_FALSE(h.on_optimum);

        auto at5 = process_header(NodeProtocolState{f.n("N5"), {}, {}}, h, f.t, cfg);
        REQUIRE(std::holds_alternative<Forward>(at5));
        h = std::get<Forward>(at5).header;
        CHECK(h.successor == f.n("N10"));
        CHECK(h.on_optimum);

        auto at10 = process_header(NodeProtocolState{f.n("N10"), {}, {}}, h, f.t, cfg);
        CHECK(std::holds_alternative<Terminate>(at10));
    }

    SUBCASE("destination terminates") {
        auto h = f.header_at("N10");
        CHECK(std::holds_alternative<Terminate>(process_header(NodeProtocolState{f.n("N10"), {}, {}}, h, f.t, cfg)));
    }

    SUBCASE("node on neither route map: malformed") {
        auto h = f.header_at("N3");
        auto a = process_header(NodeProtocolState{f.n("N3"), {}, {}}, h, f.t, cfg);
        REQUIRE(std::holds_alternative<Drop>(a));
        CHECK(std::get<Drop>(a).reason == DropReason::Malformed);
    }

    SUBCASE("header addressed to another node: malformed") {
        auto a = process_header(n6, f.header_at("N1"), f.t, cfg);
        REQUIRE(std::holds_alternative<Drop>(a));
        CHECK(std::get<Drop>(a).reason == DropReason::Malformed);
    }

    SUBCASE("flag 0 with an empty bypass: malformed") {
        auto h = f.header_at("N6");
        h.on_optimum = false;
        auto a = process_header(n6, h, f.t, cfg);
        REQUIRE(std::holds_alternative<Drop>(a));
        CHECK(std::get<Drop>(a).reason == DropReason::Malformed);
    }

    SUBCASE("no alternative at all: no-bypass") {
        auto g = Topology::build({"A", "B"}, {{"A", "B", 1.0}});
        NodeProtocolState a_state{g.node("A"), {}, {make_link_key(g.node("A"), g.node("B"))}};
        BurstHeader h;
        h.successor = g.node("A");
        h.optimum_route = {g.node("A"), g.node("B")};
        auto a = process_header(a_state, h, g, cfg);
        REQUIRE(std::holds_alternative<Drop>(a));
        CHECK(std::get<Drop>(a).reason == DropReason::NoBypass);
    }

    SUBCASE("GA backend finds the same bypass") {
        cfg.backend = RoutingBackend::Ga;
        n6.known_down_links.insert(make_link_key(f.n("N6"), f.n("N10")));
        auto a = process_header(n6, f.header_at("N6"), f.t, cfg);
        REQUIRE(std::holds_alternative<Reroute>(a));
        CHECK(std::get<Reroute>(a).header.bypass_route == f.r({"N6", "N7", "N5", "N10"}));
    }

    SUBCASE("fault at the source") {
        NodeProtocolState n1{f.n("N1"), {}, {make_link_key(f.n("N1"), f.n("N6"))}};
        auto a = process_header(n1, f.header_at("N1"), f.t, cfg);
        REQUIRE(std::holds_alternative<Reroute>(a));
        // The rejoin node is N6; N10 lies ahead of it and is avoided.
        CHECK(std::get<Reroute>(a).header.bypass_route == f.r({"N1", "N2", "N3", "N4", "N5", "N7", "N6"}));
    }

    SUBCASE("nested failure on the bypass reroutes again") {
        n6.known_down_links.insert(make_link_key(f.n("N6"), f.n("N10")));
        auto h = next_header(process_header(n6, f.header_at("N6"), f.t, cfg));
        NodeProtocolState n7{f.n("N7"), {}, {make_link_key(f.n("N7"), f.n("N5"))}};
        auto a = process_header(n7, h, f.t, cfg);
        // N7's only other neighbour is N6, already visited: the search falls back to an unconstrained path.
        REQUIRE(std::holds_alternative<Reroute>(a));
        const auto& h2 = std::get<Reroute>(a).header;
        CHECK(h2.bypass_route.front() == f.n("N7"));
        CHECK(h2.bypass_route.back() == f.n("N10"));
    }
}

TEST_CASE("ack timers") {
    Fig1 f;
    ProtocolConfig cfg;
    cfg.t_s = SimTime{50};
    NodeProtocolState s{f.n("N6"), {}, {}};
    const auto n10 = f.n("N10");

    arm_ack_timer(s, 1, n10, SimTime{100}, cfg);
    CHECK(s.pending_acks.at({1, n10}) == SimTime{150});

    SUBCASE("ack in time clears the entry") {
        CHECK(acknowledge(s, 1, n10));
        CHECK(s.pending_acks.empty());
        CHECK_FALSE(on_ack_timeout(s, 1, n10, SimTime{150}));
        CHECK(s.known_down_links.empty());
    }
    SUBCASE("no ack: the link becomes suspected") {
        CHECK_FALSE(on_ack_timeout(s, 1, n10, SimTime{149}));
        auto link = on_ack_timeout(s, 1, n10, SimTime{150});
        REQUIRE(link);
        CHECK(*link == make_link_key(f.n("N6"), n10));
        CHECK(s.suspects(f.n("N6"), n10));
    }
    SUBCASE("two bursts to a dead successor mark the link once") {
        arm_ack_timer(s, 2, n10, SimTime{110}, cfg);
        CHECK(on_ack_timeout(s, 1, n10, SimTime{150}));
        CHECK(on_ack_timeout(s, 2, n10, SimTime{160}));
        CHECK(s.known_down_links.size() == 1);
        CHECK(s.pending_acks.empty());
    }
    SUBCASE("late ack does not rehabilitate; repair does") {
        on_ack_timeout(s, 1, n10, SimTime{150});
        CHECK_FALSE(acknowledge(s, 1, n10));
        CHECK(s.suspects(f.n("N6"), n10));
        on_link_repair(s, make_link_key(n10, f.n("N6")));
        CHECK_FALSE(s.suspects(f.n("N6"), n10));
    }
    SUBCASE("re-arming replaces the deadline") {
        arm_ack_timer(s, 1, n10, SimTime{120}, cfg);
        CHECK(s.pending_acks.at({1, n10}) == SimTime{170});
    }
}

TEST_CASE("offset") {
    ProtocolConfig cfg;
    cfg.t_h = SimTime{10};
    cfg.t_s = SimTime{50};
    CHECK(compute_offset(cfg, 0) == SimTime{60});
    std::vector<SimTime> offsets{SimTime{0}, SimTime{25}};
    CHECK(compute_offset(cfg, 1, offsets) == SimTime{85});
    CHECK(compute_offset(cfg, 0, offsets) == SimTime{60});
    cfg.t_h = SimTime{0};
    CHECK_FALSE(cfg.validate().empty());
    cfg.t_h = SimTime{10};
    cfg.t_s = SimTime{0};
    CHECK_FALSE(cfg.validate().empty());
}

TEST_CASE("loss of light monitor") {
    Fig1 f;
    LossOfLightMonitor m(f.n("N10"));
    auto l1 = make_link_key(f.n("N6"), f.n("N10"));
    auto l2 = make_link_key(f.n("N9"), f.n("N10"));
    SUBCASE("down transition is recorded") {
        auto rec = m.observe(l1, LinkState::Down, SimTime{500});
        REQUIRE(rec);
        CHECK(rec->at == SimTime{500});
        CHECK(rec->link == l1);
        CHECK(rec->node == f.n("N10"));
    }
    SUBCASE("up to up is not") { CHECK_FALSE(m.observe(l1, LinkState::Up, SimTime{5})); }
    SUBCASE("two links, two records") {
        m.observe(l1, LinkState::Down, SimTime{1});
        m.observe(l2, LinkState::Down, SimTime{2});
        CHECK(m.records().size() == 2);
        CHECK_FALSE(m.observe(l1, LinkState::Down, SimTime{3}));
    }
}

// --- properties over random single failures ---

namespace {

struct Walk {
    std::vector<NodeId> nodes;
    bool delivered = false;
    std::optional<DropReason> dropped;
};

// Carries a header hop by hop. Only `detector` knows about the failure.
Walk carry(const Topology& topo, const std::vector<NodeId>& optimum, NodeId detector, LinkKey failed,
           const ProtocolConfig& cfg) {
    Walk w;
    BurstHeader h;
    h.burst_id = 1;
    h.successor = optimum.front();
    h.optimum_route = optimum;
    NodeId at = optimum.front();
    for (int step = 0; step < 64; ++step) {
        w.nodes.push_back(at);
        NodeProtocolState st{at, {}, {}};
        if (at == detector) st.known_down_links.insert(failed);
        auto a = process_header(st, h, topo, cfg);
        if (std::holds_alternative<Terminate>(a)) {
            w.delivered = true;
            return w;
        }
        if (auto d = std::get_if<Drop>(&a)) {
            w.dropped = d->reason;
            return w;
        }
        h = std::holds_alternative<Forward>(a) ? std::get<Forward>(a).header : std::get<Reroute>(a).header;
        // Header-field discipline.
        CHECK(topo.find_link(at, h.successor));
        CHECK(make_link_key(at, h.successor) != failed);
        if (!h.on_optimum) {
            REQUIRE_FALSE(h.bypass_route.empty());
            CHECK(std::find(h.bypass_route.begin(), h.bypass_route.end(), h.successor) != h.bypass_route.end());
        }
        at = h.successor;
    }
    FAIL("header did not settle");
    return w;
}

}  // namespace

TEST_CASE("property: single failure on random graphs is loop-free and reachable") {
    std::mt19937_64 rng(21);
    ProtocolConfig cfg;
    int checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        auto n = std::uniform_int_distribution<std::uint32_t>(3, 12)(rng);
        auto g = oracle::random_connected(rng, n, n, 4);
        auto topo = oracle::to_topology(g);
        auto src = std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
        auto dst = std::uniform_int_distribution<std::uint32_t>(0, n - 1)(rng);
        if (src == dst) continue;
        auto optimum = exact_shortest_path(topo, NodeId{src}, NodeId{dst});
        REQUIRE(optimum);
        auto k = std::uniform_int_distribution<std::size_t>(0, optimum->hops() - 1)(rng);
        NodeId detector = optimum->nodes[k];
        LinkKey failed = make_link_key(detector, optimum->nodes[k + 1]);

        auto cut = g;
        for (auto& e : cut.edges) {
            if (make_link_key(NodeId{e.a}, NodeId{e.b}) == failed) e.up = false;
        }
        bool connected = oracle::brute_shortest(cut, src, dst).has_value();
        auto walk = carry(topo, optimum->nodes, detector, failed, cfg);
        CHECK(walk.delivered == connected);
        if (!connected) {
            CHECK(walk.dropped == DropReason::NoBypass);
            continue;
        }
        // Loop freedom holds whenever the detector can reach the destination without revisiting the prefix.
        auto avoid = cut;
        for (auto& e : avoid.edges) {
            for (std::size_t i = 0; i < k; ++i) {
                if (e.a == optimum->nodes[i].value || e.b == optimum->nodes[i].value) e.up = false;
            }
        }
        if (oracle::brute_shortest(avoid, detector.value, dst)) {
            std::set<NodeId> seen(walk.nodes.begin(), walk.nodes.end());
            CHECK(seen.size() == walk.nodes.size());
            ++checked;
        }
    }
    CHECK(checked > 200);
}
