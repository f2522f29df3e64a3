#include <algorithm>
#include <random>
#include <unordered_map>

#include "obs/routing.hpp"

namespace obs {

namespace {

using Chromosome = std::vector<NodeId>;

// Removes cycles: on revisiting a node, cut back to its first occurrence.
Chromosome loop_erase(const Chromosome& walk) {
    Chromosome out;
    std::unordered_map<std::uint32_t, std::size_t> position;
    for (auto n : walk) {
        auto it = position.find(n.value);
        if (it != position.end()) {
            for (std::size_t i = it->second + 1; i < out.size(); ++i) position.erase(out[i].value);
            out.resize(it->second + 1);
            continue;
        }
        position[n.value] = out.size();
        out.push_back(n);
    }
    return out;
}

struct Individual {
    Chromosome nodes;
    double cost = 0.0;
};

bool fitter(const Individual& x, const Individual& y) {
    if (x.cost != y.cost) return x.cost < y.cost;
    return x.nodes < y.nodes;
}

class GeneticSearch {
public:
    GeneticSearch(const Topology& topo, NodeId src, NodeId dst, const GaConfig& cfg)
        : topo_(topo), src_(src), dst_(dst), cfg_(cfg), rng_(cfg.seed), step_budget_(4 * topo.node_count()) {}

    std::optional<Path> run() {
        auto population = initial_population();
        if (population.empty()) return std::nullopt;
        std::sort(population.begin(), population.end(), fitter);

        for (std::size_t gen = 0; gen < cfg_.generations; ++gen) {
            std::vector<Individual> next;
            next.reserve(cfg_.population_size);
            next.push_back(population.front());
            while (next.size() < cfg_.population_size) {
                const auto& a = tournament(population);
                const auto& b = tournament(population);
                Chromosome child = chance(cfg_.crossover_rate) ? crossover(a, b) : a.nodes;
                if (chance(cfg_.mutation_rate)) child = mutate(child);
                next.push_back(evaluate(std::move(child)));
            }
            std::sort(next.begin(), next.end(), fitter);
            population = std::move(next);
        }
        const auto& best = population.front();
        return Path{best.nodes, best.cost};
    }

private:
    bool chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

    std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng_); }

    Individual evaluate(Chromosome nodes) const {
        double cost = *route_cost(topo_, nodes);
        return Individual{std::move(nodes), cost};
    }

    // Loop-erased random walk from `from` towards dst over Up links.
    std::optional<Chromosome> walk(NodeId from) {
        Chromosome path{from};
        NodeId cur = from;
        for (std::size_t step = 0; step < step_budget_ && cur != dst_; ++step) {
            std::vector<NodeId> options;
            for (const auto& adj : topo_.adjacent(cur)) {
                if (topo_.link(adj.link).state == LinkState::Up) options.push_back(adj.node);
            }
            if (options.empty()) return std::nullopt;
            cur = options[pick(options.size())];
            path.push_back(cur);
            path = loop_erase(path);
        }
        if (cur != dst_) return std::nullopt;
        return path;
    }

    std::vector<Individual> initial_population() {
        std::vector<Individual> pop;
        const std::size_t attempts = 10 * cfg_.population_size;
        for (std::size_t i = 0; i < attempts && pop.size() < cfg_.population_size; ++i) {
            if (auto w = walk(src_)) pop.push_back(evaluate(std::move(*w)));
        }
        for (std::size_t i = 0; !pop.empty() && pop.size() < cfg_.population_size; ++i) pop.push_back(pop[i]);
        return pop;
    }

    const Individual& tournament(const std::vector<Individual>& pop) {
        const auto& x = pop[pick(pop.size())];
        const auto& y = pop[pick(pop.size())];
        return fitter(y, x) ? y : x;
    }

    Chromosome crossover(const Individual& a, const Individual& b) {
        std::vector<std::pair<std::size_t, std::size_t>> common;
        for (std::size_t i = 1; i + 1 < a.nodes.size(); ++i) {
            for (std::size_t j = 1; j + 1 < b.nodes.size(); ++j) {
                if (a.nodes[i] == b.nodes[j]) common.emplace_back(i, j);
            }
        }
        if (common.empty()) return fitter(b, a) ? b.nodes : a.nodes;
        auto [i, j] = common[pick(common.size())];
        Chromosome child(a.nodes.begin(), a.nodes.begin() + static_cast<std::ptrdiff_t>(i));
        child.insert(child.end(), b.nodes.begin() + static_cast<std::ptrdiff_t>(j), b.nodes.end());
        return loop_erase(child);
    }

    Chromosome mutate(const Chromosome& c) {
        std::size_t at = c.size() > 2 ? 1 + pick(c.size() - 2) : 0;
        auto regrown = walk(c[at]);
        if (!regrown) return c;
        Chromosome child(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(at));
        child.insert(child.end(), regrown->begin(), regrown->end());
        return loop_erase(child);
    }

    const Topology& topo_;
    NodeId src_;
    NodeId dst_;
    GaConfig cfg_;
    std::mt19937_64 rng_;
    std::size_t step_budget_;
};

}  // namespace

std::optional<Path> ga_shortest_path(const Topology& topo, NodeId src, NodeId dst, const GaConfig& cfg) {
    if (!topo.contains(src) || !topo.contains(dst)) {
        throw TopologyError(TopologyError::Kind::UnknownNode, "unknown node in GA request");
    }
    if (src == dst) return Path{{src}, 0.0};
    return GeneticSearch(topo, src, dst, cfg).run();
}

}  // namespace obs
