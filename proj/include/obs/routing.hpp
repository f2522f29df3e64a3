#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "obs/topology.hpp"

namespace obs {

struct Path {
    std::vector<NodeId> nodes;
    double cost = 0.0;

    std::size_t hops() const { return nodes.empty() ? 0 : nodes.size() - 1; }

    friend bool operator==(const Path&, const Path&) = default;
};

std::string format_path(const Topology& topo, const Path& path);
std::string format_route(const Topology& topo, const std::vector<NodeId>& nodes);

// Sum of link weights along `nodes`; nullopt if a hop is missing or Down.
std::optional<double> route_cost(const Topology& topo, const std::vector<NodeId>& nodes);

// Simple, every hop an Up link, cost matching the link weights.
bool is_valid_path(const Topology& topo, const Path& path);

struct GaConfig {
    std::size_t population_size = 20;
    std::size_t generations = 50;
    double crossover_rate = 0.9;
    double mutation_rate = 0.1;
    std::uint64_t seed = 1;

    std::vector<std::string> validate() const;

    friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

enum class RoutingBackend { Exact, Ga };

std::string_view to_string(RoutingBackend b);
std::optional<RoutingBackend> parse_backend(std::string_view s);

// Label-setting shortest path over Up links. Among equal-cost paths the
// lexicographically smallest node sequence wins. Throws TopologyError on an
// unknown node.
std::optional<Path> exact_shortest_path(const Topology& topo, NodeId src, NodeId dst);

// Genetic search over path-encoded chromosomes (loop-erased random-walk
// initialisation, common-node crossover, suffix-regrowth mutation, elitism of
// one, size-2 tournament on raw cost). Deterministic in cfg.seed.
std::optional<Path> ga_shortest_path(const Topology& topo, NodeId src, NodeId dst, const GaConfig& cfg);

std::optional<Path> shortest_path(RoutingBackend backend, const Topology& topo, NodeId src, NodeId dst,
                                  const GaConfig& ga);

// Path from the node that detected `failed` to the node that was its next hop,
// computed with `failed` taken out of service.
std::optional<Path> bypass_path(const Topology& topo, NodeId detecting, NodeId rejoin, LinkKey failed,
                                RoutingBackend backend, const GaConfig& ga);

// All simple paths src->dst over Up links with at most max_hops hops, sorted
// by (cost, node sequence).
std::vector<Path> simple_paths(const Topology& topo, NodeId src, NodeId dst, std::size_t max_hops);

// Working path plus the shortest path that shares no link with it.
struct DisjointPair {
    Path working;
    Path backup;
};

std::optional<DisjointPair> link_disjoint_pair(const Topology& topo, NodeId src, NodeId dst);

}  // namespace obs
