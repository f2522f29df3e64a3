#include "obs/scenario.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "obs/routing.hpp"

namespace obs {

std::string_view to_string(Mode m) { return m == Mode::Restoration ? "restoration" : "protection"; }

std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "restoration") return Mode::Restoration;
    if (s == "protection") return Mode::Protection;
    return std::nullopt;
}

const AssemblerConfig& ScenarioConfig::assembler_for(const std::string& node) const {
    auto it = assembler_overrides.find(node);
    return it == assembler_overrides.end() ? assembler : it->second;
}

Topology build_topology(const ScenarioConfig& cfg) { return Topology::build(cfg.nodes, cfg.links); }

namespace {

std::string at(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

}  // namespace

std::vector<std::string> validate(const ScenarioConfig& cfg) {
    std::vector<std::string> errors;
    auto err = [&](const std::string& path, const std::string& msg) { errors.push_back(path + ": " + msg); };

    std::set<std::string> nodes;
    if (cfg.nodes.empty()) err("topology.nodes", "at least one node required");
    for (std::size_t i = 0; i < cfg.nodes.size(); ++i) {
        if (cfg.nodes[i].empty()) err(at("topology.nodes", i), "empty node name");
        if (!nodes.insert(cfg.nodes[i]).second) err(at("topology.nodes", i), "duplicate node '" + cfg.nodes[i] + "'");
    }
    auto known = [&](const std::string& n) { return nodes.contains(n); };

    std::set<std::pair<std::string, std::string>> pairs;
    SimTime max_link_delay{0};
    for (std::size_t i = 0; i < cfg.links.size(); ++i) {
        const auto& l = cfg.links[i];
        auto path = at("topology.links", i);
        if (!known(l.a)) err(path + ".a", "unknown node '" + l.a + "'");
        if (!known(l.b)) err(path + ".b", "unknown node '" + l.b + "'");
        if (l.a == l.b) err(path, "self-loop on '" + l.a + "'");
        if (!(l.weight > 0.0)) err(path + ".weight", "must be > 0");
        if (l.delay < SimTime{0}) err(path + ".delay", "must be >= 0");
        auto key = std::minmax(l.a, l.b);
        if (!pairs.insert({key.first, key.second}).second) err(path, "duplicate link " + l.a + "-" + l.b);
        max_link_delay = std::max(max_link_delay, l.delay);
    }

    for (const auto& e : cfg.assembler.validate()) errors.push_back("assembly." + e);
    for (const auto& [node, a] : cfg.assembler_overrides) {
        if (!known(node)) err("assembly.nodes." + node, "unknown node");
        for (const auto& e : a.validate()) errors.push_back("assembly.nodes." + node + "." + e);
    }

    for (const auto& e : cfg.protocol.validate()) errors.push_back("protocol." + e);
    if (cfg.protocol.t_s > SimTime{0} && cfg.protocol.t_s <= 2 * max_link_delay) {
        err("protocol.t_s", "must exceed the round trip of the slowest link (" +
                                format_time(2 * max_link_delay) + ") or every ack times out");
    }

    std::map<std::string, std::set<std::string>> destinations;
    for (std::size_t i = 0; i < cfg.traffic.size(); ++i) {
        const auto& s = cfg.traffic[i];
        auto path = at("traffic.streams", i);
        if (!known(s.src)) err(path + ".src", "unknown node '" + s.src + "'");
        if (!known(s.dst)) err(path + ".dst", "unknown node '" + s.dst + "'");
        if (s.src == s.dst) err(path, "src and dst must differ");
        if (s.scripted()) {
            for (std::size_t k = 0; k < s.script.size(); ++k) {
                if (s.script[k].at < SimTime{0}) err(at(path + ".arrivals", k), "time must be >= 0");
                if (s.script[k].length <= 0) err(at(path + ".arrivals", k), "length must be > 0");
                if (k > 0 && s.script[k].at < s.script[k - 1].at) err(at(path + ".arrivals", k), "times must be non-decreasing");
            }
        } else {
            if (!(s.rate_pps > 0.0)) err(path + ".rate", "must be > 0");
            if (s.length.min <= 0) err(path + ".length", "must be > 0");
            if (s.length.min > s.length.max) err(path + ".length", "min must not exceed max");
        }
        if (known(s.src)) {
            const auto& a = cfg.assembler_for(s.src);
            if (a.algorithm == Algorithm::PriorityAAS && s.class_index >= a.priority.n_classes()) {
                err(path + ".class", "class " + std::to_string(s.class_index) + " outside priority class table");
            }
            destinations[s.src].insert(s.dst);
        }
    }
    for (const auto& [src, dsts] : destinations) {
        const auto& a = cfg.assembler_for(src);
        if (a.algorithm == Algorithm::PriorityAAS && dsts.size() > a.priority.m_destinations) {
            err("assembly.priority.destinations",
                "node " + src + " sends to " + std::to_string(dsts.size()) + " destinations");
        }
    }

    std::map<std::pair<std::string, std::string>, std::vector<std::pair<SimTime, SimTime>>> windows;
    for (std::size_t i = 0; i < cfg.faults.size(); ++i) {
        const auto& f = cfg.faults[i];
        auto path = at("faults", i);
        auto key = std::minmax(f.a, f.b);
        if (!pairs.contains({key.first, key.second})) err(path + ".link", "no such link " + f.a + "-" + f.b);
        if (f.fail < SimTime{0}) err(path + ".fail", "must be >= 0");
        if (f.repair && *f.repair <= f.fail) err(path + ".repair", "must be later than fail");
        windows[{key.first, key.second}].push_back({f.fail, f.repair.value_or(SimTime::max())});
    }
    for (auto& [key, list] : windows) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 1; k < list.size(); ++k) {
            if (list[k].first < list[k - 1].second) err("faults", "overlapping windows on link " + key.first + "-" + key.second);
        }
    }

    if (cfg.horizon < SimTime{0}) err("sim.horizon", "must be >= 0");
    if (cfg.drain < SimTime{0}) err("sim.drain", "must be >= 0");
    if (cfg.histogram_bin <= 0) err("report.histogram_bin", "must be > 0");

    if (!errors.empty()) return errors;

    // Reachability checks need a well-formed topology.
    Topology topo = build_topology(cfg);
    for (std::size_t i = 0; i < cfg.traffic.size(); ++i) {
        const auto& s = cfg.traffic[i];
        auto src = topo.node(s.src);
        auto dst = topo.node(s.dst);
        if (cfg.mode == Mode::Protection) {
            if (!link_disjoint_pair(topo, src, dst)) {
                err(at("traffic.streams", i), "protection mode needs a link-disjoint backup " + s.src + "->" + s.dst);
            }
        } else if (!exact_shortest_path(topo, src, dst)) {
            err(at("traffic.streams", i), "no path " + s.src + "->" + s.dst);
        }
    }
    return errors;
}

ScenarioConfig default_scenario() {
    ScenarioConfig cfg;
    Topology fig = figure1_topology();
    cfg.nodes = fig.names();
    for (const auto& l : fig.links()) cfg.links.push_back({fig.name(l.a), fig.name(l.b), l.weight, l.delay});
    TrafficStream s;
    s.src = "N1";
    s.dst = "N10";
    cfg.traffic.push_back(s);
    return cfg;
}

}  // namespace obs
