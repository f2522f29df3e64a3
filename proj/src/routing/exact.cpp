#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <sstream>

#include "obs/routing.hpp"

namespace obs {

namespace {

bool nearly_equal(double x, double y) { return std::abs(x - y) <= 1e-9 * std::max({1.0, std::abs(x), std::abs(y)}); }

void require_node(const Topology& topo, NodeId n) {
    if (!topo.contains(n)) {
        throw TopologyError(TopologyError::Kind::UnknownNode, "unknown node id " + std::to_string(n.value));
    }
}

}  // namespace

std::string format_route(const Topology& topo, const std::vector<NodeId>& nodes) {
    std::string out = "[";
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (i) out += ",";
        out += topo.name(nodes[i]);
    }
    return out + "]";
}

std::string format_path(const Topology& topo, const Path& path) {
    std::ostringstream os;
    os << format_route(topo, path.nodes) << " cost " << path.cost;
    return os.str();
}

std::optional<double> route_cost(const Topology& topo, const std::vector<NodeId>& nodes) {
    double cost = 0.0;
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        auto index = topo.find_link(nodes[i - 1], nodes[i]);
        if (!index || topo.link(*index).state != LinkState::Up) return std::nullopt;
        cost += topo.link(*index).weight;
    }
    return cost;
}

bool is_valid_path(const Topology& topo, const Path& path) {
    if (path.nodes.empty()) return false;
    for (auto n : path.nodes) {
        if (!topo.contains(n)) return false;
    }
    auto sorted = path.nodes;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
    auto cost = route_cost(topo, path.nodes);
    return cost && nearly_equal(*cost, path.cost);
}

std::vector<std::string> GaConfig::validate() const {
    std::vector<std::string> errors;
    if (population_size < 2) errors.push_back("population: must be >= 2");
    if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) errors.push_back("crossover: must be in [0,1]");
    if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) errors.push_back("mutation: must be in [0,1]");
    return errors;
}

std::string_view to_string(RoutingBackend b) { return b == RoutingBackend::Exact ? "exact" : "ga"; }

std::optional<RoutingBackend> parse_backend(std::string_view s) {
    if (s == "exact") return RoutingBackend::Exact;
    if (s == "ga") return RoutingBackend::Ga;
    return std::nullopt;
}

std::optional<Path> exact_shortest_path(const Topology& topo, NodeId src, NodeId dst) {
    require_node(topo, src);
    require_node(topo, dst);
    const auto inf = std::numeric_limits<double>::infinity();

    // Distances to dst; the greedy walk below then picks the smallest
    // neighbour that stays on some shortest path.
    std::vector<double> dist(topo.node_count(), inf);
    std::vector<bool> settled(topo.node_count(), false);
    using Item = std::pair<double, std::uint32_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    dist[dst.value] = 0.0;
    heap.push({0.0, dst.value});
    while (!heap.empty()) {
        auto [d, u] = heap.top();
        heap.pop();
        if (settled[u]) continue;
        settled[u] = true;
        for (const auto& adj : topo.adjacent(NodeId{u})) {
            const auto& l = topo.link(adj.link);
            if (l.state != LinkState::Up) continue;
            double nd = d + l.weight;
            if (nd < dist[adj.node.value]) {
                dist[adj.node.value] = nd;
                heap.push({nd, adj.node.value});
            }
        }
    }
    if (dist[src.value] == inf) return std::nullopt;

    Path path{{src}, dist[src.value]};
    NodeId cur = src;
    while (cur != dst) {
        std::optional<NodeId> next;
        for (const auto& adj : topo.adjacent(cur)) {
            const auto& l = topo.link(adj.link);
            if (l.state != LinkState::Up || dist[adj.node.value] == inf) continue;
            if (nearly_equal(dist[cur.value], l.weight + dist[adj.node.value]) &&
                dist[adj.node.value] < dist[cur.value]) {
                next = adj.node;
                break;
            }
        }
        if (!next) return std::nullopt;
        path.nodes.push_back(*next);
        cur = *next;
    }
    path.cost = *route_cost(topo, path.nodes);
    return path;
}

std::optional<Path> shortest_path(RoutingBackend backend, const Topology& topo, NodeId src, NodeId dst,
                                  const GaConfig& ga) {
    return backend == RoutingBackend::Exact ? exact_shortest_path(topo, src, dst)
                                            : ga_shortest_path(topo, src, dst, ga);
}

std::optional<Path> bypass_path(const Topology& topo, NodeId detecting, NodeId rejoin, LinkKey failed,
                                RoutingBackend backend, const GaConfig& ga) {
    Topology without = topo;
    if (without.find_link(failed.lo, failed.hi)) without.set_link_state(failed.lo, failed.hi, LinkState::Down);
    return shortest_path(backend, without, detecting, rejoin, ga);
}

std::vector<Path> simple_paths(const Topology& topo, NodeId src, NodeId dst, std::size_t max_hops) {
    require_node(topo, src);
    require_node(topo, dst);
    std::vector<Path> out;
    std::vector<NodeId> stack{src};
    std::vector<bool> on_path(topo.node_count(), false);
    on_path[src.value] = true;

    std::function<void(NodeId, double)> dfs = [&](NodeId u, double cost) {
        if (u == dst) {
            out.push_back(Path{stack, cost});
            return;
        }
        if (stack.size() - 1 >= max_hops) return;
        for (const auto& adj : topo.adjacent(u)) {
            const auto& l = topo.link(adj.link);
            if (l.state != LinkState::Up || on_path[adj.node.value]) continue;
            on_path[adj.node.value] = true;
            stack.push_back(adj.node);
            dfs(adj.node, cost + l.weight);
            stack.pop_back();
            on_path[adj.node.value] = false;
        }
    };
    dfs(src, 0.0);
    std::sort(out.begin(), out.end(), [](const Path& x, const Path& y) {
        if (x.cost != y.cost) return x.cost < y.cost;
        return x.nodes < y.nodes;
    });
    return out;
}

std::optional<DisjointPair> link_disjoint_pair(const Topology& topo, NodeId src, NodeId dst) {
    auto working = exact_shortest_path(topo, src, dst);
    if (!working || working->nodes.size() < 2) return std::nullopt;
    Topology pruned = topo;
    for (std::size_t i = 1; i < working->nodes.size(); ++i) {
        pruned.set_link_state(working->nodes[i - 1], working->nodes[i], LinkState::Down);
    }
    auto backup = exact_shortest_path(pruned, src, dst);
    if (!backup) return std::nullopt;
    return DisjointPair{*working, *backup};
}

}  // namespace obs
