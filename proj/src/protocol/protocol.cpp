#include "obs/protocol.hpp"

#include <algorithm>

namespace obs {

std::string_view to_string(DropReason r) {
    switch (r) {
        case DropReason::LinkFailure: return "link-failure";
        case DropReason::NoBypass: return "no-bypass";
        case DropReason::OffsetViolation: return "offset-violation";
        case DropReason::Malformed: return "malformed";
    }
    return "?";
}

std::string_view action_name(const HeaderAction& a) {
    struct Namer {
        std::string_view operator()(const Forward&) const { return "forward"; }
        std::string_view operator()(const Terminate&) const { return "terminate"; }
        std::string_view operator()(const Reroute&) const { return "reroute"; }
        std::string_view operator()(const Drop&) const { return "drop"; }
    };
    return std::visit(Namer{}, a);
}

std::vector<std::string> ProtocolConfig::validate() const {
    std::vector<std::string> errors;
    if (t_h <= SimTime{0}) errors.push_back("t_h: must be > 0 (header processing time)");
    if (t_s <= SimTime{0}) errors.push_back("t_s: must be > 0 (ack timeout window)");
    for (const auto& e : ga.validate()) errors.push_back("ga." + e);
    return errors;
}

namespace {

std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::optional<std::size_t> index_of(const std::vector<NodeId>& route, NodeId n) {
    auto it = std::find(route.begin(), route.end(), n);
    if (it == route.end()) return std::nullopt;
    return static_cast<std::size_t>(it - route.begin());
}

Topology without_nodes(Topology view, const std::set<NodeId>& excluded) {
    for (auto n : excluded) {
        for (const auto& adj : view.adjacent(n)) view.set_link_state(n, adj.node, LinkState::Down);
    }
    return view;
}

struct BypassRequest {
    NodeId from;
    NodeId rejoin;
    NodeId dest;
    std::set<NodeId> visited;
    std::set<NodeId> ahead;
};

std::optional<Path> search_bypass(const NodeProtocolState& state, const Topology& topo, const ProtocolConfig& cfg,
                                  BurstId burst, BypassRequest req) {
    Topology view = topo;
    for (const auto& link : state.known_down_links) {
        if (view.find_link(link.lo, link.hi)) view.set_link_state(link.lo, link.hi, LinkState::Down);
    }
    GaConfig ga = cfg.ga;
    ga.seed = mix(cfg.ga.seed ^ mix(burst) ^ (static_cast<std::uint64_t>(state.node.value) << 32));

    req.visited.erase(req.from);
    req.ahead.erase(req.from);
    req.visited.erase(req.rejoin);
    req.ahead.erase(req.rejoin);
    std::set<NodeId> both = req.visited;
    both.insert(req.ahead.begin(), req.ahead.end());
    if (auto p = shortest_path(cfg.backend, without_nodes(view, both), req.from, req.rejoin, ga)) return p;

    req.visited.erase(req.dest);
    if (auto p = shortest_path(cfg.backend, without_nodes(view, req.visited), req.from, req.dest, ga)) return p;
    return shortest_path(cfg.backend, view, req.from, req.dest, ga);
}

HeaderAction reroute(const NodeProtocolState& state, BurstHeader header, const Topology& topo,
                     const ProtocolConfig& cfg, BypassRequest req) {
    auto path = search_bypass(state, topo, cfg, header.burst_id, std::move(req));
    if (!path || path->nodes.size() < 2) return Drop{DropReason::NoBypass};
    header.bypass_route = path->nodes;
    header.on_optimum = false;
    header.successor = header.bypass_route[1];
    return Reroute{std::move(header)};
}

HeaderAction along_optimum(const NodeProtocolState& state, BurstHeader header, const Topology& topo,
                           const ProtocolConfig& cfg) {
    const auto& route = header.optimum_route;
    auto k = index_of(route, state.node);
    if (!k) return Drop{DropReason::Malformed};
    if (*k + 1 == route.size()) return Terminate{};
    NodeId next = route[*k + 1];
    if (!state.suspects(state.node, next)) {
        header.successor = next;
        return Forward{std::move(header)};
    }
    BypassRequest req{state.node, next, route.back(), {}, {}};
    req.visited.insert(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(*k));
    req.visited.insert(header.bypass_route.begin(), header.bypass_route.end());
    req.ahead.insert(route.begin() + static_cast<std::ptrdiff_t>(*k + 2), route.end());
    return reroute(state, std::move(header), topo, cfg, std::move(req));
}

HeaderAction along_bypass(const NodeProtocolState& state, BurstHeader header, const Topology& topo,
                          const ProtocolConfig& cfg) {
    const auto& bypass = header.bypass_route;
    auto k = index_of(bypass, state.node);
    if (!k) return Drop{DropReason::Malformed};
    if (*k + 1 == bypass.size()) {
        // Rejoin node reached directly from a two-node bypass.
        header.on_optimum = true;
        return along_optimum(state, std::move(header), topo, cfg);
    }
    NodeId next = bypass[*k + 1];
    if (state.suspects(state.node, next)) {
        const auto& route = header.optimum_route;
        auto start = index_of(route, bypass.front());
        auto rejoin = index_of(route, bypass.back());
        BypassRequest req{state.node, bypass.back(), route.back(), {}, {}};
        req.visited.insert(bypass.begin(), bypass.begin() + static_cast<std::ptrdiff_t>(*k));
        if (start) req.visited.insert(route.begin(), route.begin() + static_cast<std::ptrdiff_t>(*start));
        if (rejoin) req.ahead.insert(route.begin() + static_cast<std::ptrdiff_t>(*rejoin + 1), route.end());
        return reroute(state, std::move(header), topo, cfg, std::move(req));
    }
    header.successor = next;
    if (*k + 2 == bypass.size()) header.on_optimum = true;
    return Forward{std::move(header)};
}

}  // namespace

HeaderAction process_header(const NodeProtocolState& state, BurstHeader header, const Topology& topo,
                            const ProtocolConfig& cfg) {
    if (header.successor != state.node) return Drop{DropReason::Malformed};
    if (header.optimum_route.empty()) return Drop{DropReason::Malformed};
    if (header.on_optimum) return along_optimum(state, std::move(header), topo, cfg);
    if (header.bypass_route.empty()) return Drop{DropReason::Malformed};
    return along_bypass(state, std::move(header), topo, cfg);
}

void arm_ack_timer(NodeProtocolState& state, BurstId burst, NodeId successor, SimTime now, const ProtocolConfig& cfg) {
    state.pending_acks[{burst, successor}] = now + cfg.t_s;
}

bool acknowledge(NodeProtocolState& state, BurstId burst, NodeId from) {
    return state.pending_acks.erase({burst, from}) > 0;
}

std::optional<LinkKey> on_ack_timeout(NodeProtocolState& state, BurstId burst, NodeId successor, SimTime now) {
    auto it = state.pending_acks.find({burst, successor});
    if (it == state.pending_acks.end() || it->second > now) return std::nullopt;
    state.pending_acks.erase(it);
    auto link = make_link_key(state.node, successor);
    state.known_down_links.insert(link);
    return link;
}

void on_link_repair(NodeProtocolState& state, LinkKey link) { state.known_down_links.erase(link); }

SimTime compute_offset(const ProtocolConfig& cfg, std::size_t class_index, std::span<const SimTime> class_offsets) {
    SimTime extra{0};
    if (class_index < class_offsets.size()) extra = class_offsets[class_index];
    return cfg.t_h + cfg.t_s + extra;
}

std::optional<LossOfLightRecord> LossOfLightMonitor::observe(LinkKey link, LinkState state, SimTime now) {
    auto [it, inserted] = last_.try_emplace(link, LinkState::Up);
    LinkState before = it->second;
    it->second = state;
    if (before == LinkState::Up && state == LinkState::Down) {
        records_.push_back({now, node_, link});
        return records_.back();
    }
    return std::nullopt;
}

}  // namespace obs
