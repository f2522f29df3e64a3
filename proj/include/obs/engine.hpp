#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "obs/packet.hpp"
#include "obs/protocol.hpp"
#include "obs/scenario.hpp"
#include "obs/topology.hpp"

namespace obs {

// --- traffic ---

struct Arrival {
    SimTime at{0};
    std::size_t stream = 0;
    Packet packet;
};

// Arrivals of every stream before `until`, merged in (time, stream) order.
// Poisson streams draw exponential gaps from a per-stream generator seeded by
// (seed, stream index), so adding a stream never perturbs the others.
std::vector<Arrival> generate_traffic(const std::vector<TrafficStream>& streams, const Topology& topo,
                                      std::uint64_t seed, SimTime until);

// --- faults ---

struct LinkEvent {
    SimTime at{0};
    LinkKey link;
    LinkState state = LinkState::Down;
};

// Expands a fault schedule into time-ordered link transitions. Throws
// std::invalid_argument on unknown links, repair <= fail, or overlapping
// windows on one link.
std::vector<LinkEvent> inject_fault(const Topology& topo, const std::vector<FaultWindow>& schedule);

// --- metrics ---

struct ClassMetrics {
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
    std::uint64_t queued = 0;
    std::uint64_t in_flight = 0;
    double mean_e2e_delay_us = 0.0;
    double mean_assembly_delay_us = 0.0;

    friend bool operator==(const ClassMetrics&, const ClassMetrics&) = default;
};

struct MetricsReport {
    std::string mode;
    std::uint64_t generated = 0;
    std::uint64_t delivered = 0;
    std::uint64_t lost = 0;
    std::uint64_t queued = 0;
    std::uint64_t in_flight = 0;
    std::map<std::string, std::uint64_t> lost_by_reason;
    double loss_rate = 0.0;

    double mean_e2e_delay_us = 0.0;
    double p95_e2e_delay_us = 0.0;
    double mean_assembly_delay_us = 0.0;

    std::uint64_t bursts_emitted = 0;
    std::uint64_t bursts_delivered = 0;
    std::uint64_t bursts_lost = 0;
    double mean_burst_bytes = 0.0;
    std::map<Bytes, std::uint64_t> burst_size_histogram;  // bin lower bound -> count
    double interdeparture_cv = 0.0;

    std::map<std::string, std::int64_t> link_byte_hops;
    std::int64_t total_byte_hops = 0;

    std::uint64_t reroutes = 0;
    std::uint64_t ack_timeouts = 0;
    std::uint64_t loss_of_light_events = 0;
    std::optional<double> recovery_time_us;

    std::vector<ClassMetrics> per_class;

    friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

// --- run ---

enum class TraceKind {
    PacketArrival,
    BurstEmitted,
    Header,
    BcpSend,
    BcpLost,
    BdpSend,
    BdpLost,
    Delivered,
    Dropped,
    AckArrival,
    AckLate,
    AckLost,
    AckTimeout,
    LinkFail,
    LinkRepair,
    LossOfLight,
    SimEnd,
};

std::string_view to_string(TraceKind k);

struct TraceRecord {
    SimTime at{0};
    TraceKind kind = TraceKind::SimEnd;
    std::optional<NodeId> node;
    std::optional<NodeId> peer;
    std::optional<BurstId> burst;
    std::string detail;
};

// One application of the header rules at a node.
struct HeaderStep {
    SimTime at{0};
    NodeId node;
    BurstId burst = 0;
    std::string action;
    NodeId successor;
    bool on_optimum = true;
    std::vector<NodeId> bypass_route;
};

// A link traversal by a control or data message: occupies the link over [sent, sent + delay].
struct Transmission {
    SimTime sent{0};
    SimTime arrives{0};
    NodeId from;
    NodeId to;
    BurstId burst = 0;
    bool data = false;
};

struct Suspicion {
    SimTime at{0};
    NodeId node;
    LinkKey link;
};

struct BurstFate {
    enum class Status { InFlight, Delivered, Lost };

    BurstId burst = 0;
    NodeId source;
    NodeId dest;
    std::size_t class_index = 0;
    std::size_t packets = 0;
    Bytes bytes = 0;
    SimTime emitted_at{0};
    Status status = Status::InFlight;
    std::optional<DropReason> reason;
    SimTime resolved_at{0};
    bool rerouted = false;
    std::vector<NodeId> visited;  // nodes the payload reached, in order
};

struct RunOptions {
    bool trace = false;
};

struct RunResult {
    MetricsReport report;
    std::vector<TraceRecord> trace;
    std::vector<HeaderStep> header_steps;
    std::vector<Transmission> transmissions;
    std::vector<Suspicion> suspicions;
    std::vector<LossOfLightRecord> loss_of_light;
    std::vector<BurstFate> bursts;
    Topology topology;
};

class ScenarioError : public std::runtime_error {
public:
    explicit ScenarioError(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

// Runs the scenario to horizon + drain. Throws ScenarioError before the first
// event if validation fails.
RunResult run(const ScenarioConfig& scenario, const RunOptions& options = {});

// `scenario` forced into 1+1 protection mode.
RunResult run_protection_baseline(ScenarioConfig scenario, const RunOptions& options = {});

// Independent runs. The parallel version distributes scenarios over OpenMP
// threads; results are index-aligned with the input and identical to the
// serial version.
std::vector<RunResult> run_sweep(std::span<const ScenarioConfig> scenarios, const RunOptions& options = {});
std::vector<RunResult> run_sweep_serial(std::span<const ScenarioConfig> scenarios, const RunOptions& options = {});

}  // namespace obs
