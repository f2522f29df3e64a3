#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "obs/engine.hpp"

namespace obs {

std::vector<Arrival> generate_traffic(const std::vector<TrafficStream>& streams, const Topology& topo,
                                      std::uint64_t seed, SimTime until) {
    std::vector<Arrival> out;
    for (std::size_t index = 0; index < streams.size(); ++index) {
        const auto& s = streams[index];
        Packet proto;
        proto.class_index = s.class_index;
        proto.source = topo.node(s.src);
        proto.dest = topo.node(s.dst);

        if (s.scripted()) {
            for (const auto& a : s.script) {
                if (a.at >= until) break;
                Packet p = proto;
                p.length = a.length;
                p.created_at = a.at;
                out.push_back({a.at, index, p});
            }
            continue;
        }

        std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                          static_cast<std::uint32_t>(index)};
        std::mt19937_64 rng(seq);
        std::exponential_distribution<double> gap(s.rate_pps / 1e6);  // per microsecond
        std::uniform_int_distribution<Bytes> length(s.length.min, s.length.max);
        double clock = 0.0;
        while (true) {
            clock += gap(rng);
            auto at = SimTime{static_cast<std::int64_t>(std::floor(clock))};
            if (at >= until) break;
            Packet p = proto;
            p.length = s.length.kind == LengthDistribution::Kind::Fixed ? s.length.min : length(rng);
            p.created_at = at;
            out.push_back({at, index, p});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Arrival& x, const Arrival& y) {
        if (x.at != y.at) return x.at < y.at;
        return x.stream < y.stream;
    });
    for (std::size_t i = 0; i < out.size(); ++i) out[i].packet.id = i;
    return out;
}

std::vector<LinkEvent> inject_fault(const Topology& topo, const std::vector<FaultWindow>& schedule) {
    std::map<LinkKey, std::vector<std::pair<SimTime, SimTime>>> windows;
    std::vector<LinkEvent> events;
    for (const auto& f : schedule) {
        auto a = topo.find_node(f.a);
        auto b = topo.find_node(f.b);
        if (!a || !b || !topo.find_link(*a, *b)) throw std::invalid_argument("no such link " + f.a + "-" + f.b);
        if (f.repair && *f.repair <= f.fail) {
            throw std::invalid_argument("repair before fail on link " + f.a + "-" + f.b);
        }
        auto key = make_link_key(*a, *b);
        windows[key].push_back({f.fail, f.repair.value_or(SimTime::max())});
        events.push_back({f.fail, key, LinkState::Down});
        if (f.repair) events.push_back({*f.repair, key, LinkState::Up});
    }
    for (auto& [key, list] : windows) {
        std::sort(list.begin(), list.end());
        for (std::size_t k = 1; k < list.size(); ++k) {
            if (list[k].first < list[k - 1].second) {
                throw std::invalid_argument("overlapping fault windows on link " + topo.describe(key));
            }
        }
    }
    // A repair and a fresh failure on the same tick: repair first.
    std::stable_sort(events.begin(), events.end(), [](const LinkEvent& x, const LinkEvent& y) {
        if (x.at != y.at) return x.at < y.at;
        return x.state == LinkState::Up && y.state == LinkState::Down;
    });
    return events;
}

}  // namespace obs
