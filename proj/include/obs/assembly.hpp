#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "obs/packet.hpp"
#include "obs/types.hpp"

namespace obs {

enum class Algorithm { FAP, FAS, MSMAP, AAS, PriorityAAS };

std::string_view to_string(Algorithm a);
std::optional<Algorithm> parse_algorithm(std::string_view s);

struct AasConfig {
    Bytes q_min = 2000;
    Bytes q_max = 20000;
    double a = 1.0;
    Bytes delta_a = 1000;
    SimTime max_period{200};

    // Q_high - Q_low, held constant while the window slides.
    Bytes width() const;

    friend bool operator==(const AasConfig&, const AasConfig&) = default;
};

struct PriorityConfig {
    std::size_t m_destinations = 1;
    std::vector<Bytes> l_max{10000};
    std::vector<SimTime> t_max{SimTime{100}};
    std::vector<SimTime> offset{SimTime{0}};

    std::size_t n_classes() const { return l_max.size(); }

    friend bool operator==(const PriorityConfig&, const PriorityConfig&) = default;
};

struct AssemblerConfig {
    Algorithm algorithm = Algorithm::FAP;
    SimTime period_threshold{100};
    Bytes size_threshold = 10000;
    AasConfig aas;
    PriorityConfig priority;

    // Empty when valid. Messages are prefixed with the offending field name.
    std::vector<std::string> validate() const;

    friend bool operator==(const AssemblerConfig&, const AssemblerConfig&) = default;
};

enum class Trigger { Timer, Size, Oversize };

// Packets closed into one burst by a single-queue assembler.
struct Batch {
    std::vector<Packet> packets;
    Bytes bytes = 0;
    SimTime emitted_at{0};
    Trigger trigger = Trigger::Timer;
};

// FIFO of packets for one epoch. The epoch starts with the first packet.
class PacketQueue {
public:
    bool empty() const { return packets_.empty(); }
    Bytes bytes() const { return bytes_; }
    std::size_t size() const { return packets_.size(); }
    std::optional<SimTime> epoch_start() const { return epoch_start_; }
    const std::vector<Packet>& packets() const { return packets_; }

    void push(const Packet& p, SimTime now);
    Batch flush(SimTime now, Trigger trigger);

private:
    std::vector<Packet> packets_;
    Bytes bytes_ = 0;
    std::optional<SimTime> epoch_start_;
};

// Fixed assembly period: emit once the first queued packet has waited `period`.
class FapQueue {
public:
    explicit FapQueue(SimTime period) : period_(period) {}

    std::vector<Batch> on_packet(const Packet& p, SimTime now);
    std::vector<Batch> on_timer(SimTime now);
    std::optional<SimTime> deadline() const;
    const PacketQueue& queue() const { return queue_; }

private:
    SimTime period_;
    PacketQueue queue_;
};

// Fixed assembly size. Emits when the arriving packet would overflow the
// threshold; the newcomer opens the next burst. No timer.
class FasQueue {
public:
    explicit FasQueue(Bytes threshold) : threshold_(threshold) {}

    std::vector<Batch> on_packet(const Packet& p, SimTime now);
    std::vector<Batch> on_timer(SimTime) { return {}; }
    std::optional<SimTime> deadline() const { return std::nullopt; }
    const PacketQueue& queue() const { return queue_; }

private:
    Bytes threshold_;
    PacketQueue queue_;
};

// Size-or-time queue shared by MSMAP and the per-class priority queues.
// A due timer is always served before a packet arriving on the same tick.
class SizeTimeQueue {
public:
    SizeTimeQueue(Bytes threshold, SimTime period) : threshold_(threshold), period_(period) {}

    std::vector<Batch> on_packet(const Packet& p, SimTime now);
    std::vector<Batch> on_timer(SimTime now);
    std::optional<SimTime> deadline() const;
    const PacketQueue& queue() const { return queue_; }

    // Closes the queue if `incoming` more bytes would overflow it.
    std::optional<Batch> flush_on_overflow(Bytes incoming, SimTime now);

    Bytes threshold() const { return threshold_; }
    void set_threshold(Bytes t) { threshold_ = t; }

private:
    Bytes threshold_;
    SimTime period_;
    PacketQueue queue_;
};

using MsmapQueue = SizeTimeQueue;

struct AasWindow {
    Bytes q_low = 0;
    Bytes q_high = 0;

    friend bool operator==(const AasWindow&, const AasWindow&) = default;
};

AasWindow initial_window(const AasConfig& cfg);

// Slides the window after a burst of `emitted` bytes: up by delta_a when the
// burst reached q_high, down by delta_a when it was at most q_low, clamped to
// [q_min, q_max] with the width preserved.
AasWindow update_window(const AasWindow& w, const AasConfig& cfg, Bytes emitted);

class AasQueue {
public:
    explicit AasQueue(const AasConfig& cfg);

    std::vector<Batch> on_packet(const Packet& p, SimTime now);
    std::vector<Batch> on_timer(SimTime now);
    std::optional<SimTime> deadline() const { return inner_.deadline(); }
    const PacketQueue& queue() const { return inner_.queue(); }
    const AasWindow& window() const { return window_; }

private:
    void slide(const std::vector<Batch>& emitted);
    void slide(Bytes emitted);

    AasConfig cfg_;
    AasWindow window_;
    SizeTimeQueue inner_;
};

// Q_ij of the priority assembler: class-specific L_max[i] and T_max[i].
class PriorityQueue {
public:
    PriorityQueue(Bytes l_max, SimTime t_max) : inner_(l_max, t_max) {}

    std::vector<Batch> on_packet(const Packet& p, SimTime now) { return inner_.on_packet(p, now); }
    std::vector<Batch> on_timer(SimTime now) { return inner_.on_timer(now); }
    std::optional<SimTime> deadline() const { return inner_.deadline(); }
    const PacketQueue& queue() const { return inner_.queue(); }

private:
    SizeTimeQueue inner_;
};

using AnyQueue = std::variant<FapQueue, FasQueue, SizeTimeQueue, AasQueue, PriorityQueue>;

struct QueueKey {
    std::size_t class_index = 0;
    NodeId dest;

    friend auto operator<=>(const QueueKey&, const QueueKey&) = default;
};

struct AssemblerOutput {
    std::vector<Burst> bursts;
    // Deadline of the touched queue after the event, if it has one armed.
    std::optional<SimTime> next_deadline;
};

// Edge-node assembler: one queue per (class, destination), each running the
// configured algorithm. Burst ids come from a caller-owned counter so several
// assemblers can share one id space.
class EdgeAssembler {
public:
    EdgeAssembler(NodeId node, AssemblerConfig cfg, BurstId* next_burst_id);

    AssemblerOutput on_packet(const Packet& p, SimTime now);
    AssemblerOutput on_timer(const QueueKey& key, SimTime now);

    std::optional<SimTime> deadline(const QueueKey& key) const;
    std::size_t queued_packets() const;
    // Packets still held, for conservation accounting.
    std::vector<Packet> queued() const;
    const AssemblerConfig& config() const { return cfg_; }
    const std::map<QueueKey, AnyQueue>& queues() const { return queues_; }

private:
    AnyQueue& queue_for(const QueueKey& key);
    AssemblerOutput wrap(const QueueKey& key, std::vector<Batch> batches) const;

    NodeId node_;
    AssemblerConfig cfg_;
    BurstId* next_burst_id_;
    std::map<QueueKey, AnyQueue> queues_;
};

}  // namespace obs
