#include "obs/engine.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <queue>
#include <sstream>
#include <tuple>
#include <variant>

#include "obs/assembly.hpp"
#include "obs/routing.hpp"

namespace obs {

std::string_view to_string(TraceKind k) {
    switch (k) {
        case TraceKind::PacketArrival: return "packet_arrival";
        case TraceKind::BurstEmitted: return "burst_emitted";
        case TraceKind::Header: return "header";
        case TraceKind::BcpSend: return "bcp_send";
        case TraceKind::BcpLost: return "bcp_lost";
        case TraceKind::BdpSend: return "bdp_send";
        case TraceKind::BdpLost: return "bdp_lost";
        case TraceKind::Delivered: return "delivered";
        case TraceKind::Dropped: return "dropped";
        case TraceKind::AckArrival: return "ack";
        case TraceKind::AckLate: return "ack_late";
        case TraceKind::AckLost: return "ack_lost";
        case TraceKind::AckTimeout: return "ack_timeout";
        case TraceKind::LinkFail: return "link_fail";
        case TraceKind::LinkRepair: return "link_repair";
        case TraceKind::LossOfLight: return "loss_of_light";
        case TraceKind::SimEnd: return "sim_end";
    }
    return "?";
}

namespace {

std::string join_errors(const std::vector<std::string>& errors) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errors) msg += "\n  " + e;
    return msg;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<std::string> errors)
    : std::runtime_error(join_errors(errors)), errors_(std::move(errors)) {}

namespace {

struct PacketArrivalEv {
    Packet packet;
};
struct AssemblyTimerEv {
    NodeId node;
    QueueKey key;
};
struct BcpArrivalEv {
    NodeId node;
    NodeId from;
    SimTime sent;
    BurstHeader header;
};
struct BdpArrivalEv {
    NodeId node;
    std::optional<NodeId> from;
    SimTime sent;
    BurstId burst;
    int copy;
};
struct AckArrivalEv {
    NodeId node;
    NodeId from;
    SimTime sent;
    BurstId burst;
};
struct AckTimeoutEv {
    NodeId node;
    NodeId successor;
    BurstId burst;
};
struct LinkChangeEv {
    LinkEvent change;
};
struct SimEndEv {};

using Payload = std::variant<PacketArrivalEv, AssemblyTimerEv, BcpArrivalEv, BdpArrivalEv, AckArrivalEv,
                             AckTimeoutEv, LinkChangeEv, SimEndEv>;

struct Event {
    SimTime at;
    std::uint64_t seq;
    Payload payload;
};

struct Later {
    bool operator()(const Event& x, const Event& y) const { return std::tie(x.at, x.seq) > std::tie(y.at, y.seq); }
};

// What a node's switch does with a payload, as configured by its header.
struct SwitchEntry {
    enum class Kind { Forward, Deliver, Drop };
    Kind kind = Kind::Drop;
    NodeId next;
    SimTime ready{0};
    DropReason reason = DropReason::Malformed;
    BurstHeader received;
    SimTime bdp_at{0};
};

// A header may cross a node twice on a backtracking bypass; the switch keeps
// one connection per input port, so entries are keyed by the upstream node.
constexpr std::uint32_t kLocalPort = std::numeric_limits<std::uint32_t>::max();
using SwitchKey = std::pair<BurstId, std::uint32_t>;

std::uint32_t port(std::optional<NodeId> upstream) { return upstream ? upstream->value : kLocalPort; }

struct BurstState {
    Burst burst;
    BurstFate fate;
    int copies_outstanding = 1;
    bool working_lost = false;
    std::array<std::vector<NodeId>, 2> paths;
};

double mean(const std::vector<double>& xs) {
    if (xs.empty()) return 0.0;
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, const RunOptions& options)
        : cfg_(cfg), options_(options), planned_(build_topology(cfg)), physical_(planned_) {
        for (std::size_t i = 0; i < planned_.node_count(); ++i) {
            NodeId n{static_cast<std::uint32_t>(i)};
            protocol_.push_back(NodeProtocolState{n, {}, {}});
            monitors_.emplace_back(n);
        }
        switches_.resize(planned_.node_count());
        std::size_t classes = 1;
        for (const auto& s : cfg.traffic) classes = std::max(classes, s.class_index + 1);
        per_class_.resize(classes);
        assembly_delay_.resize(classes);
        e2e_by_class_.resize(classes);
        for (const auto& f : cfg.faults) {
            auto key = make_link_key(planned_.node(f.a), planned_.node(f.b));
            windows_[key].push_back({f.fail, f.repair.value_or(SimTime::max())});
            if (!first_fault_ || f.fail < *first_fault_) first_fault_ = f.fail;
        }
    }

    RunResult run() {
        for (const auto& a : generate_traffic(cfg_.traffic, planned_, cfg_.traffic_seed, cfg_.horizon)) {
            schedule(a.at, PacketArrivalEv{a.packet});
        }
        for (const auto& change : inject_fault(planned_, cfg_.faults)) schedule(change.at, LinkChangeEv{change});
        const SimTime end = cfg_.horizon + cfg_.drain;
        schedule(end, SimEndEv{});

        while (!queue_.empty()) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.at;
            if (std::holds_alternative<SimEndEv>(ev.payload)) {
                trace(TraceKind::SimEnd, std::nullopt, std::nullopt, std::nullopt, "");
                break;
            }
            std::visit([this](auto& payload) { handle(payload); }, ev.payload);
        }
        return finish();
    }

private:
    // --- scheduling and bookkeeping ---

    void schedule(SimTime at, Payload payload) { queue_.push(Event{at, next_seq_++, std::move(payload)}); }

    void trace(TraceKind kind, std::optional<NodeId> node, std::optional<NodeId> peer, std::optional<BurstId> burst,
               std::string detail, std::optional<SimTime> at = std::nullopt) {
        if (!options_.trace) return;
        result_.trace.push_back(TraceRecord{at.value_or(now_), kind, node, peer, burst, std::move(detail)});
    }

    SimTime delay(NodeId a, NodeId b) const { return planned_.link_between(a, b).delay; }

    // Physical state over [t0, t1]: the link must not fail at any instant of the flight.
    bool up_throughout(NodeId a, NodeId b, SimTime t0, SimTime t1) const {
        auto it = windows_.find(make_link_key(a, b));
        if (it == windows_.end()) return true;
        for (const auto& [fail, repair] : it->second) {
            if (fail <= t1 && repair > t0) return false;
        }
        return true;
    }

    EdgeAssembler& assembler(NodeId node) {
        auto it = assemblers_.find(node);
        if (it == assemblers_.end()) {
            it = assemblers_.emplace(node, EdgeAssembler(node, cfg_.assembler_for(planned_.name(node)), &next_burst_))
                     .first;
        }
        return it->second;
    }

    const Path& optimum_route(NodeId src, NodeId dst) {
        auto key = std::make_pair(src, dst);
        auto it = routes_.find(key);
        if (it != routes_.end()) return it->second;
        GaConfig ga = cfg_.protocol.ga;
        ga.seed ^= (static_cast<std::uint64_t>(src.value) << 40) ^ (static_cast<std::uint64_t>(dst.value) << 20);
        auto path = shortest_path(cfg_.protocol.backend, planned_, src, dst, ga);
        if (!path) throw std::runtime_error("no route " + planned_.name(src) + "->" + planned_.name(dst));
        return routes_.emplace(key, *path).first->second;
    }

    const DisjointPair& protection_pair(NodeId src, NodeId dst) {
        auto key = std::make_pair(src, dst);
        auto it = pairs_.find(key);
        if (it != pairs_.end()) return it->second;
        auto pair = link_disjoint_pair(planned_, src, dst);
        if (!pair) throw std::runtime_error("no disjoint pair " + planned_.name(src) + "->" + planned_.name(dst));
        return pairs_.emplace(key, *pair).first->second;
    }

    std::string describe(const BurstHeader& h) const {
        std::ostringstream os;
        os << "succ=" << planned_.name(h.successor) << " flag=" << (h.on_optimum ? 1 : 0)
           << " optimum=" << format_route(planned_, h.optimum_route)
           << " bypass=" << format_route(planned_, h.bypass_route);
        return os.str();
    }

    // --- assembly ---

    void handle(const PacketArrivalEv& ev) {
        const auto& p = ev.packet;
        per_class_[p.class_index].generated++;
        trace(TraceKind::PacketArrival, p.source, p.dest, std::nullopt,
              "packet=" + std::to_string(p.id) + " bytes=" + std::to_string(p.length) +
                  " class=" + std::to_string(p.class_index));
        auto out = assembler(p.source).on_packet(p, now_);
        assembled(p.source, QueueKey{p.class_index, p.dest}, std::move(out));
    }

    void handle(const AssemblyTimerEv& ev) {
        auto out = assembler(ev.node).on_timer(ev.key, now_);
        assembled(ev.node, ev.key, std::move(out));
    }

    void assembled(NodeId node, const QueueKey& key, AssemblerOutput out) {
        for (auto& burst : out.bursts) emit(std::move(burst));
        if (out.next_deadline) {
            auto slot = std::make_tuple(node, key.class_index, key.dest);
            auto it = armed_.find(slot);
            if (it == armed_.end() || it->second != *out.next_deadline) {
                armed_[slot] = *out.next_deadline;
                schedule(*out.next_deadline, AssemblyTimerEv{node, key});
            }
        }
    }

    void emit(Burst burst) {
        const SimTime at = burst.assembled_at;
        auto& report = result_.report;
        report.bursts_emitted++;
        report.burst_size_histogram[(burst.total_bytes / cfg_.histogram_bin) * cfg_.histogram_bin]++;
        burst_bytes_.push_back(static_cast<double>(burst.total_bytes));
        emissions_[std::make_tuple(burst.source, burst.class_index, burst.dest)].push_back(at);
        for (const auto& p : burst.packets) {
            assembly_delay_[p.class_index].push_back(static_cast<double>((at - p.created_at).count()));
        }
        trace(TraceKind::BurstEmitted, burst.source, burst.dest, burst.burst_id,
              "bytes=" + std::to_string(burst.total_bytes) + " packets=" + std::to_string(burst.packets.size()) +
                  " class=" + std::to_string(burst.class_index));

        BurstState state;
        state.fate.burst = burst.burst_id;
        state.fate.source = burst.source;
        state.fate.dest = burst.dest;
        state.fate.class_index = burst.class_index;
        state.fate.packets = burst.packets.size();
        state.fate.bytes = burst.total_bytes;
        state.fate.emitted_at = at;
        const BurstId id = burst.burst_id;
        const NodeId src = burst.source;
        const NodeId dst = burst.dest;
        const std::size_t cls = burst.class_index;
        state.burst = std::move(burst);

        if (cfg_.mode == Mode::Protection) {
            const auto& pair = protection_pair(src, dst);
            state.paths = {pair.working.nodes, pair.backup.nodes};
            state.copies_outstanding = 2;
            bursts_.emplace(id, std::move(state));
            schedule(at, BdpArrivalEv{src, std::nullopt, at, id, 0});
            schedule(at, BdpArrivalEv{src, std::nullopt, at, id, 1});
            return;
        }

        bursts_.emplace(id, std::move(state));
        const auto& acfg = cfg_.assembler_for(planned_.name(src));
        std::span<const SimTime> class_offsets;
        if (acfg.algorithm == Algorithm::PriorityAAS) class_offsets = acfg.priority.offset;
        const SimTime offset = compute_offset(cfg_.protocol, cls, class_offsets);

        BurstHeader header;
        header.burst_id = id;
        header.successor = src;
        header.optimum_route = optimum_route(src, dst).nodes;
        header.on_optimum = true;
        header.class_index = cls;
        header.offset = offset;
        // The source builds the header itself; no processing delay is charged.
        process_at(src, std::nullopt, header, SimTime{0}, at + offset);
        schedule(at + offset, BdpArrivalEv{src, std::nullopt, at, id, 0});
    }

    // --- control plane ---

    void process_at(NodeId node, std::optional<NodeId> upstream, const BurstHeader& received, SimTime processing,
                    SimTime bdp_at) {
        auto action = process_header(protocol_[node.value], received, planned_, cfg_.protocol);
        const BurstId id = received.burst_id;

        HeaderStep step{now_, node, id, std::string(action_name(action)), received.successor, received.on_optimum,
                        received.bypass_route};
        SwitchEntry entry;
        entry.ready = now_ + processing;
        entry.received = received;
        entry.bdp_at = bdp_at;

        std::visit(
            [&](auto& a) {
                using T = std::decay_t<decltype(a)>;
                if constexpr (std::is_same_v<T, Forward> || std::is_same_v<T, Reroute>) {
                    step.successor = a.header.successor;
                    step.on_optimum = a.header.on_optimum;
                    step.bypass_route = a.header.bypass_route;
                    entry.kind = SwitchEntry::Kind::Forward;
                    entry.next = a.header.successor;
                    trace(TraceKind::Header, node, a.header.successor, id,
                          std::string(action_name(action)) + " " + describe(a.header));
                    if constexpr (std::is_same_v<T, Reroute>) {
                        auto& fate = bursts_.at(id).fate;
                        fate.rerouted = true;
                        result_.report.reroutes++;
                    }
                    send_bcp(node, a.header, entry.ready, bdp_at);
                } else if constexpr (std::is_same_v<T, Terminate>) {
                    entry.kind = SwitchEntry::Kind::Deliver;
                    trace(TraceKind::Header, node, std::nullopt, id, "terminate " + describe(received));
                } else {
                    entry.kind = SwitchEntry::Kind::Drop;
                    entry.reason = a.reason;
                    trace(TraceKind::Header, node, std::nullopt, id, "drop " + std::string(to_string(a.reason)));
                }
            },
            action);
        result_.header_steps.push_back(std::move(step));
        switches_[node.value][{id, port(upstream)}] = std::move(entry);
    }

    void send_bcp(NodeId node, BurstHeader header, SimTime send_at, SimTime bdp_at) {
        const NodeId next = header.successor;
        const SimTime d = delay(node, next);
        header.offset = bdp_at - send_at;
        result_.transmissions.push_back({send_at, send_at + d, node, next, header.burst_id, false});
        trace(TraceKind::BcpSend, node, next, header.burst_id, "offset=" + format_time(header.offset), send_at);
        arm_ack_timer(protocol_[node.value], header.burst_id, next, send_at, cfg_.protocol);
        schedule(send_at + cfg_.protocol.t_s, AckTimeoutEv{node, next, header.burst_id});
        schedule(send_at + d, BcpArrivalEv{next, node, send_at, std::move(header)});
    }

    void handle(const BcpArrivalEv& ev) {
        const BurstId id = ev.header.burst_id;
        if (!up_throughout(ev.from, ev.node, ev.sent, now_)) {
            trace(TraceKind::BcpLost, ev.node, ev.from, id, "");
            return;
        }
        schedule(now_ + delay(ev.node, ev.from), AckArrivalEv{ev.from, ev.node, now_, id});
        process_at(ev.node, ev.from, ev.header, cfg_.protocol.t_h, now_ + ev.header.offset);
    }

    void handle(const AckArrivalEv& ev) {
        if (!up_throughout(ev.from, ev.node, ev.sent, now_)) {
            trace(TraceKind::AckLost, ev.node, ev.from, ev.burst, "");
            return;
        }
        bool matched = acknowledge(protocol_[ev.node.value], ev.burst, ev.from);
        trace(matched ? TraceKind::AckArrival : TraceKind::AckLate, ev.node, ev.from, ev.burst, "");
    }

    void handle(const AckTimeoutEv& ev) {
        auto& state = protocol_[ev.node.value];
        auto link = on_ack_timeout(state, ev.burst, ev.successor, now_);
        if (!link) return;
        result_.report.ack_timeouts++;
        result_.suspicions.push_back({now_, ev.node, *link});
        trace(TraceKind::AckTimeout, ev.node, ev.successor, ev.burst, "suspect " + planned_.describe(*link));

        // Re-route the timed-out burst if its payload has not been committed yet.
        auto& table = switches_[ev.node.value];
        auto it = std::find_if(table.lower_bound({ev.burst, 0}), table.end(), [&](const auto& kv) {
            return kv.first.first != ev.burst || kv.second.next == ev.successor;
        });
        if (it == table.end() || it->first.first != ev.burst) return;
        const auto& entry = it->second;
        const std::uint32_t in_port = it->first.second;
        auto fate = bursts_.find(ev.burst);
        if (entry.kind != SwitchEntry::Kind::Forward || entry.next != ev.successor ||
            entry.bdp_at < now_ + cfg_.protocol.t_h || fate == bursts_.end() ||
            fate->second.fate.status != BurstFate::Status::InFlight) {
            return;
        }
        BurstHeader received = entry.received;
        SimTime bdp_at = entry.bdp_at;
        std::optional<NodeId> upstream;
        if (in_port != kLocalPort) upstream = NodeId{in_port};
        process_at(ev.node, upstream, received, cfg_.protocol.t_h, bdp_at);
    }

    // --- data plane ---

    void handle(const BdpArrivalEv& ev) {
        auto it = bursts_.find(ev.burst);
        if (it == bursts_.end()) return;
        auto& state = it->second;
        if (ev.from && !up_throughout(*ev.from, ev.node, ev.sent, now_)) {
            trace(TraceKind::BdpLost, ev.node, ev.from, ev.burst, "copy=" + std::to_string(ev.copy));
            lose(state, ev.copy, DropReason::LinkFailure);
            return;
        }

        if (cfg_.mode == Mode::Protection) {
            const auto& path = state.paths[ev.copy];
            if (ev.node == state.fate.dest) {
                deliver(state, ev.copy);
                return;
            }
            auto pos = std::find(path.begin(), path.end(), ev.node);
            forward_bdp(ev.node, *(pos + 1), state, ev.copy);
            return;
        }

        state.fate.visited.push_back(ev.node);
        auto& table = switches_[ev.node.value];
        auto entry_it = table.find({ev.burst, port(ev.from)});
        if (entry_it == table.end()) {
            // Header never got here: it was lost with the link.
            lose(state, ev.copy, DropReason::LinkFailure);
            return;
        }
        SwitchEntry entry = std::move(entry_it->second);
        table.erase(entry_it);
        if (entry.ready > now_) {
            lose(state, ev.copy, DropReason::OffsetViolation);
            return;
        }
        switch (entry.kind) {
            case SwitchEntry::Kind::Deliver: deliver(state, ev.copy); break;
            case SwitchEntry::Kind::Drop: lose(state, ev.copy, entry.reason); break;
            case SwitchEntry::Kind::Forward: forward_bdp(ev.node, entry.next, state, ev.copy); break;
        }
    }

    void forward_bdp(NodeId node, NodeId next, BurstState& state, int copy) {
        const SimTime d = delay(node, next);
        const BurstId id = state.fate.burst;
        link_usage_[make_link_key(node, next)] += state.fate.bytes;
        result_.transmissions.push_back({now_, now_ + d, node, next, id, true});
        trace(TraceKind::BdpSend, node, next, id, "copy=" + std::to_string(copy));
        schedule(now_ + d, BdpArrivalEv{next, node, now_, id, copy});
    }

    void lose(BurstState& state, int copy, DropReason reason) {
        state.copies_outstanding--;
        if (copy == 0) state.working_lost = true;
        if (state.fate.status != BurstFate::Status::InFlight || state.copies_outstanding > 0) return;
        state.fate.status = BurstFate::Status::Lost;
        state.fate.reason = reason;
        state.fate.resolved_at = now_;
        trace(TraceKind::Dropped, std::nullopt, std::nullopt, state.fate.burst, std::string(to_string(reason)));
    }

    void deliver(BurstState& state, int copy) {
        state.copies_outstanding--;
        if (state.fate.status != BurstFate::Status::InFlight) return;
        state.fate.status = BurstFate::Status::Delivered;
        state.fate.resolved_at = now_;
        for (const auto& p : state.burst.packets) {
            double d = static_cast<double>((now_ - p.created_at).count());
            e2e_.push_back(d);
            e2e_by_class_[p.class_index].push_back(d);
        }
        trace(TraceKind::Delivered, state.fate.dest, std::nullopt, state.fate.burst, "copy=" + std::to_string(copy));
        bool recovered = cfg_.mode == Mode::Restoration ? state.fate.rerouted : (copy == 1 && state.working_lost);
        if (first_fault_ && recovered && now_ >= *first_fault_ && !result_.report.recovery_time_us) {
            result_.report.recovery_time_us = static_cast<double>((now_ - *first_fault_).count());
        }
    }

    // --- faults ---

    void handle(const LinkChangeEv& ev) {
        const auto& change = ev.change;
        physical_.set_link_state(change.link.lo, change.link.hi, change.state);
        const bool fail = change.state == LinkState::Down;
        trace(fail ? TraceKind::LinkFail : TraceKind::LinkRepair, change.link.lo, change.link.hi, std::nullopt,
              planned_.describe(change.link));
        for (NodeId end : {change.link.lo, change.link.hi}) {
            if (auto rec = monitors_[end.value].observe(change.link, change.state, now_)) {
                result_.loss_of_light.push_back(*rec);
                result_.report.loss_of_light_events++;
                trace(TraceKind::LossOfLight, end, std::nullopt, std::nullopt, planned_.describe(change.link));
            }
            if (!fail) on_link_repair(protocol_[end.value], change.link);
        }
    }

    void handle(const SimEndEv&) {}

    // --- report ---

    RunResult finish() {
        auto& report = result_.report;
        report.mode = std::string(to_string(cfg_.mode));

        for (const auto& [node, assembler] : assemblers_) {
            for (const auto& p : assembler.queued()) per_class_[p.class_index].queued++;
        }
        for (auto& [id, state] : bursts_) {
            auto& cls = per_class_[state.fate.class_index];
            switch (state.fate.status) {
                case BurstFate::Status::Delivered:
                    cls.delivered += state.fate.packets;
                    report.bursts_delivered++;
                    break;
                case BurstFate::Status::Lost:
                    cls.lost += state.fate.packets;
                    report.bursts_lost++;
                    report.lost_by_reason[std::string(to_string(*state.fate.reason))] += state.fate.packets;
                    break;
                case BurstFate::Status::InFlight: cls.in_flight += state.fate.packets; break;
            }
            result_.bursts.push_back(std::move(state.fate));
        }
        for (auto reason : {DropReason::LinkFailure, DropReason::NoBypass, DropReason::OffsetViolation}) {
            report.lost_by_reason.try_emplace(std::string(to_string(reason)), 0);
        }

        for (std::size_t c = 0; c < per_class_.size(); ++c) {
            auto& cls = per_class_[c];
            cls.mean_e2e_delay_us = mean(e2e_by_class_[c]);
            cls.mean_assembly_delay_us = mean(assembly_delay_[c]);
            report.generated += cls.generated;
            report.delivered += cls.delivered;
            report.lost += cls.lost;
            report.queued += cls.queued;
            report.in_flight += cls.in_flight;
        }
        report.per_class = per_class_;
        report.loss_rate =
            report.generated ? static_cast<double>(report.lost) / static_cast<double>(report.generated) : 0.0;

        report.mean_e2e_delay_us = mean(e2e_);
        if (!e2e_.empty()) {
            auto sorted = e2e_;
            std::sort(sorted.begin(), sorted.end());
            auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(sorted.size())));
            report.p95_e2e_delay_us = sorted[std::max<std::size_t>(rank, 1) - 1];
        }
        std::vector<double> all_assembly;
        for (const auto& v : assembly_delay_) all_assembly.insert(all_assembly.end(), v.begin(), v.end());
        report.mean_assembly_delay_us = mean(all_assembly);
        report.mean_burst_bytes = mean(burst_bytes_);

        std::vector<double> gaps;
        for (const auto& [queue, times] : emissions_) {
            for (std::size_t i = 1; i < times.size(); ++i) gaps.push_back(static_cast<double>((times[i] - times[i - 1]).count()));
        }
        if (gaps.size() >= 2) {
            double m = mean(gaps);
            double var = 0.0;
            for (double g : gaps) var += (g - m) * (g - m);
            var /= static_cast<double>(gaps.size());
            report.interdeparture_cv = m > 0 ? std::sqrt(var) / m : 0.0;
        }

        for (const auto& [link, bytes] : link_usage_) {
            report.link_byte_hops[planned_.describe(link)] = bytes;
            report.total_byte_hops += bytes;
        }
        std::sort(result_.bursts.begin(), result_.bursts.end(),
                  [](const BurstFate& x, const BurstFate& y) { return x.burst < y.burst; });
        result_.topology = planned_;
        return std::move(result_);
    }

    const ScenarioConfig& cfg_;
    RunOptions options_;
    Topology planned_;   // as built; the routing map every node starts from
    Topology physical_;  // actual link states

    std::priority_queue<Event, std::vector<Event>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    SimTime now_{0};

    BurstId next_burst_ = 0;
    std::map<NodeId, EdgeAssembler> assemblers_;
    std::map<std::tuple<NodeId, std::size_t, NodeId>, SimTime> armed_;
    std::vector<NodeProtocolState> protocol_;
    std::vector<LossOfLightMonitor> monitors_;
    std::vector<std::map<SwitchKey, SwitchEntry>> switches_;
    std::map<BurstId, BurstState> bursts_;
    std::map<std::pair<NodeId, NodeId>, Path> routes_;
    std::map<std::pair<NodeId, NodeId>, DisjointPair> pairs_;
    std::map<LinkKey, std::vector<std::pair<SimTime, SimTime>>> windows_;
    std::optional<SimTime> first_fault_;

    std::vector<ClassMetrics> per_class_;
    std::vector<std::vector<double>> assembly_delay_;
    std::vector<std::vector<double>> e2e_by_class_;
    std::vector<double> e2e_;
    std::vector<double> burst_bytes_;
    std::map<std::tuple<NodeId, std::size_t, NodeId>, std::vector<SimTime>> emissions_;
    std::map<LinkKey, std::int64_t> link_usage_;

    RunResult result_;
};

}  // namespace

RunResult run(const ScenarioConfig& scenario, const RunOptions& options) {
    auto errors = validate(scenario);
    if (!errors.empty()) throw ScenarioError(std::move(errors));
    return Simulation(scenario, options).run();
}

RunResult run_protection_baseline(ScenarioConfig scenario, const RunOptions& options) {
    scenario.mode = Mode::Protection;
    return run(scenario, options);
}

}  // namespace obs
