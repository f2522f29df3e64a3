#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "obs/types.hpp"

namespace obs {

enum class LinkState { Up, Down };

inline constexpr SimTime kDefaultLinkDelay{10};

struct Link {
    NodeId a;
    NodeId b;
    double weight = 1.0;
    SimTime delay = kDefaultLinkDelay;
    LinkState state = LinkState::Up;

    LinkKey key() const { return make_link_key(a, b); }
    NodeId other(NodeId n) const { return n == a ? b : a; }
};

struct LinkSpec {
    std::string a;
    std::string b;
    double weight = 1.0;
    SimTime delay = kDefaultLinkDelay;

    friend bool operator==(const LinkSpec&, const LinkSpec&) = default;
};

class TopologyError : public std::runtime_error {
public:
    enum class Kind {
        DuplicateNode,
        DuplicateLink,
        UnknownEndpoint,
        NonPositiveWeight,
        NegativeDelay,
        SelfLoop,
        UnknownNode,
        UnknownLink,
    };

    TopologyError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

// Weighted undirected graph with per-link Up/Down state. Adjacency lists are
// kept sorted by neighbour id so every traversal is deterministic.
class Topology {
public:
    struct Adjacent {
        NodeId node;
        std::size_t link;
    };

    static Topology build(const std::vector<std::string>& nodes, const std::vector<LinkSpec>& links);

    std::size_t node_count() const { return names_.size(); }
    std::size_t link_count() const { return links_.size(); }

    bool contains(NodeId n) const { return n.value < names_.size(); }
    NodeId node(std::string_view name) const;
    std::optional<NodeId> find_node(std::string_view name) const;
    const std::string& name(NodeId n) const;
    const std::vector<std::string>& names() const { return names_; }

    std::span<const Link> links() const { return links_; }
    const Link& link(std::size_t index) const { return links_.at(index); }
    std::optional<std::size_t> find_link(NodeId a, NodeId b) const;
    const Link& link_between(NodeId a, NodeId b) const;

    // Every incident link regardless of state.
    std::span<const Adjacent> adjacent(NodeId n) const;
    bool is_up(NodeId a, NodeId b) const;

    void set_link_state(NodeId a, NodeId b, LinkState state);
    void set_weight(NodeId a, NodeId b, double weight);

    std::string describe(LinkKey key) const;

    friend bool operator==(const Topology& x, const Topology& y) {
        return x.names_ == y.names_ && x.link_signature() == y.link_signature();
    }

private:
    std::vector<std::tuple<std::uint32_t, std::uint32_t, double, std::int64_t, int>> link_signature() const;
    std::size_t require_link(NodeId a, NodeId b) const;

    std::vector<std::string> names_;
    std::unordered_map<std::string, NodeId> by_name_;
    std::vector<Link> links_;
    std::vector<std::vector<Adjacent>> adjacency_;
};

// Value-returning variant of Topology::set_link_state.
Topology set_link_state(Topology topo, NodeId a, NodeId b, LinkState state);

// The ten-node network N1..N10 with unit weights.
Topology figure1_topology();

}  // namespace obs
