#include "obs/topology.hpp"

#include <algorithm>
#include <set>

namespace obs {

std::string format_time(SimTime t) { return std::to_string(t.count()) + "us"; }

std::string format_bytes(Bytes b) { return std::to_string(b) + "B"; }

Topology Topology::build(const std::vector<std::string>& nodes, const std::vector<LinkSpec>& links) {
    Topology topo;
    for (const auto& name : nodes) {
        if (topo.by_name_.contains(name)) {
            throw TopologyError(TopologyError::Kind::DuplicateNode, "duplicate node '" + name + "'");
        }
        NodeId id{static_cast<std::uint32_t>(topo.names_.size())};
        topo.by_name_.emplace(name, id);
        topo.names_.push_back(name);
    }
    topo.adjacency_.resize(topo.names_.size());

    std::set<LinkKey> seen;
    for (const auto& spec : links) {
        auto a = topo.find_node(spec.a);
        auto b = topo.find_node(spec.b);
        if (!a || !b) {
            throw TopologyError(TopologyError::Kind::UnknownEndpoint,
                                "link " + spec.a + "-" + spec.b + " references unknown node '" +
                                    (a ? spec.b : spec.a) + "'");
        }
        if (*a == *b) {
            throw TopologyError(TopologyError::Kind::SelfLoop, "self-loop on node '" + spec.a + "'");
        }
        if (!(spec.weight > 0.0)) {
            throw TopologyError(TopologyError::Kind::NonPositiveWeight,
                                "link " + spec.a + "-" + spec.b + " has non-positive weight");
        }
        if (spec.delay < SimTime{0}) {
            throw TopologyError(TopologyError::Kind::NegativeDelay,
                                "link " + spec.a + "-" + spec.b + " has negative delay");
        }
        if (!seen.insert(make_link_key(*a, *b)).second) {
            throw TopologyError(TopologyError::Kind::DuplicateLink,
                                "duplicate link " + spec.a + "-" + spec.b);
        }
        std::size_t index = topo.links_.size();
        topo.links_.push_back(Link{*a, *b, spec.weight, spec.delay, LinkState::Up});
        topo.adjacency_[a->value].push_back({*b, index});
        topo.adjacency_[b->value].push_back({*a, index});
    }
    for (auto& adj : topo.adjacency_) {
        std::sort(adj.begin(), adj.end(), [](const Adjacent& x, const Adjacent& y) { return x.node < y.node; });
    }
    return topo;
}

NodeId Topology::node(std::string_view name) const {
    if (auto id = find_node(name)) return *id;
    throw TopologyError(TopologyError::Kind::UnknownNode, "unknown node '" + std::string(name) + "'");
}

std::optional<NodeId> Topology::find_node(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

const std::string& Topology::name(NodeId n) const {
    if (!contains(n)) {
        throw TopologyError(TopologyError::Kind::UnknownNode, "unknown node id " + std::to_string(n.value));
    }
    return names_[n.value];
}

std::optional<std::size_t> Topology::find_link(NodeId a, NodeId b) const {
    if (!contains(a) || !contains(b)) return std::nullopt;
    for (const auto& adj : adjacency_[a.value]) {
        if (adj.node == b) return adj.link;
    }
    return std::nullopt;
}

std::size_t Topology::require_link(NodeId a, NodeId b) const {
    if (auto index = find_link(a, b)) return *index;
    std::string an = contains(a) ? names_[a.value] : "?";
    std::string bn = contains(b) ? names_[b.value] : "?";
    throw TopologyError(TopologyError::Kind::UnknownLink, "no such link " + an + "-" + bn);
}

const Link& Topology::link_between(NodeId a, NodeId b) const { return links_[require_link(a, b)]; }

std::span<const Topology::Adjacent> Topology::adjacent(NodeId n) const {
    if (!contains(n)) {
        throw TopologyError(TopologyError::Kind::UnknownNode, "unknown node id " + std::to_string(n.value));
    }
    return adjacency_[n.value];
}

bool Topology::is_up(NodeId a, NodeId b) const {
    auto index = find_link(a, b);
    return index && links_[*index].state == LinkState::Up;
}

void Topology::set_link_state(NodeId a, NodeId b, LinkState state) { links_[require_link(a, b)].state = state; }

void Topology::set_weight(NodeId a, NodeId b, double weight) {
    if (!(weight > 0.0)) {
        throw TopologyError(TopologyError::Kind::NonPositiveWeight, "non-positive weight");
    }
    links_[require_link(a, b)].weight = weight;
}

std::string Topology::describe(LinkKey key) const { return name(key.lo) + "-" + name(key.hi); }

std::vector<std::tuple<std::uint32_t, std::uint32_t, double, std::int64_t, int>> Topology::link_signature() const {
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double, std::int64_t, int>> sig;
    sig.reserve(links_.size());
    for (const auto& l : links_) {
        auto k = l.key();
        sig.emplace_back(k.lo.value, k.hi.value, l.weight, l.delay.count(), static_cast<int>(l.state));
    }
    std::sort(sig.begin(), sig.end());
    return sig;
}

Topology set_link_state(Topology topo, NodeId a, NodeId b, LinkState state) {
    topo.set_link_state(a, b, state);
    return topo;
}

Topology figure1_topology() {
    std::vector<std::string> nodes;
    for (int i = 1; i <= 10; ++i) nodes.push_back("N" + std::to_string(i));
    return Topology::build(nodes, {
                                      {"N1", "N2"},
                                      {"N2", "N3"},
                                      {"N3", "N4"},
                                      {"N4", "N5"},
                                      {"N5", "N10"},
                                      {"N1", "N6"},
                                      {"N6", "N7"},
                                      {"N7", "N5"},
                                      {"N1", "N8"},
                                      {"N8", "N9"},
                                      {"N9", "N10"},
                                      {"N6", "N10"},
                                  });
}

}  // namespace obs
