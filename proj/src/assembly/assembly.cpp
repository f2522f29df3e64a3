#include "obs/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace obs {

std::string_view to_string(Algorithm a) {
    switch (a) {
        case Algorithm::FAP: return "FAP";
        case Algorithm::FAS: return "FAS";
        case Algorithm::MSMAP: return "MSMAP";
        case Algorithm::AAS: return "AAS";
        case Algorithm::PriorityAAS: return "PriorityAAS";
    }
    return "?";
}

std::optional<Algorithm> parse_algorithm(std::string_view s) {
    for (auto a : {Algorithm::FAP, Algorithm::FAS, Algorithm::MSMAP, Algorithm::AAS, Algorithm::PriorityAAS}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

Bytes AasConfig::width() const { return static_cast<Bytes>(std::llround(a * static_cast<double>(delta_a))); }

std::vector<std::string> AssemblerConfig::validate() const {
    std::vector<std::string> errors;
    switch (algorithm) {
        case Algorithm::FAP:
            if (period_threshold <= SimTime{0}) errors.push_back("period: must be > 0");
            break;
        case Algorithm::FAS:
            if (size_threshold <= 0) errors.push_back("size: must be > 0");
            break;
        case Algorithm::MSMAP:
            if (period_threshold <= SimTime{0}) errors.push_back("period: must be > 0");
            if (size_threshold <= 0) errors.push_back("size: must be > 0");
            break;
        case Algorithm::AAS:
            if (aas.q_min <= 0) errors.push_back("aas.q_min: must be > 0");
            if (aas.q_min >= aas.q_max) errors.push_back("aas.q_max: must exceed q_min");
            if (!(aas.a > 0.0)) errors.push_back("aas.a: must be > 0");
            if (aas.delta_a <= 0) errors.push_back("aas.delta_a: must be > 0");
            if (aas.max_period <= SimTime{0}) errors.push_back("aas.max_period: must be > 0");
            if (aas.a > 0.0 && aas.delta_a > 0) {
                if (aas.width() <= 0) {
                    errors.push_back("aas.a: a * delta_a must round to at least 1 byte");
                } else if (aas.q_min + aas.width() > aas.q_max) {
                    errors.push_back("aas.q_max: window q_min + a * delta_a does not fit below q_max");
                }
            }
            break;
        case Algorithm::PriorityAAS: {
            auto n = priority.l_max.size();
            if (n == 0) errors.push_back("priority.l_max: at least one class required");
            if (priority.t_max.size() != n) errors.push_back("priority.t_max: length must equal number of classes");
            if (priority.offset.size() != n) errors.push_back("priority.offset: length must equal number of classes");
            if (priority.m_destinations == 0) errors.push_back("priority.destinations: must be > 0");
            for (std::size_t i = 0; i < priority.l_max.size(); ++i) {
                if (priority.l_max[i] <= 0) errors.push_back("priority.l_max[" + std::to_string(i) + "]: must be > 0");
            }
            for (std::size_t i = 0; i < priority.t_max.size(); ++i) {
                if (priority.t_max[i] <= SimTime{0}) {
                    errors.push_back("priority.t_max[" + std::to_string(i) + "]: must be > 0");
                }
            }
            for (std::size_t i = 0; i < priority.offset.size(); ++i) {
                if (priority.offset[i] < SimTime{0}) {
                    errors.push_back("priority.offset[" + std::to_string(i) + "]: must be >= 0");
                }
            }
            break;
        }
    }
    return errors;
}

void PacketQueue::push(const Packet& p, SimTime now) {
    if (packets_.empty()) epoch_start_ = now;
    packets_.push_back(p);
    bytes_ += p.length;
}

Batch PacketQueue::flush(SimTime now, Trigger trigger) {
    Batch b{std::move(packets_), bytes_, now, trigger};
    packets_.clear();
    bytes_ = 0;
    epoch_start_.reset();
    return b;
}

namespace {

Batch single(const Packet& p, SimTime now) {
    return Batch{{p}, p.length, now, Trigger::Oversize};
}

}  // namespace

// --- FAP ---

std::optional<SimTime> FapQueue::deadline() const {
    if (auto start = queue_.epoch_start()) return *start + period_;
    return std::nullopt;
}

std::vector<Batch> FapQueue::on_timer(SimTime now) {
    std::vector<Batch> out;
    if (auto due = deadline(); due && now >= *due) out.push_back(queue_.flush(*due, Trigger::Timer));
    return out;
}

std::vector<Batch> FapQueue::on_packet(const Packet& p, SimTime now) {
    auto out = on_timer(now);
    queue_.push(p, now);
    return out;
}

// --- FAS ---

std::vector<Batch> FasQueue::on_packet(const Packet& p, SimTime now) {
    std::vector<Batch> out;
    if (!queue_.empty() && queue_.bytes() + p.length > threshold_) out.push_back(queue_.flush(now, Trigger::Size));
    if (p.length > threshold_) {
        out.push_back(single(p, now));
    } else {
        queue_.push(p, now);
    }
    return out;
}

// --- size-or-time (MSMAP, priority) ---

std::optional<SimTime> SizeTimeQueue::deadline() const {
    if (auto start = queue_.epoch_start()) return *start + period_;
    return std::nullopt;
}

std::vector<Batch> SizeTimeQueue::on_timer(SimTime now) {
    std::vector<Batch> out;
    if (auto due = deadline(); due && now >= *due) out.push_back(queue_.flush(*due, Trigger::Timer));
    return out;
}

std::optional<Batch> SizeTimeQueue::flush_on_overflow(Bytes incoming, SimTime now) {
    if (queue_.empty() || queue_.bytes() + incoming <= threshold_) return std::nullopt;
    return queue_.flush(now, Trigger::Size);
}

std::vector<Batch> SizeTimeQueue::on_packet(const Packet& p, SimTime now) {
    auto out = on_timer(now);
    if (auto b = flush_on_overflow(p.length, now)) out.push_back(std::move(*b));
    if (p.length > threshold_) {
        out.push_back(single(p, now));
    } else {
        queue_.push(p, now);
    }
    return out;
}

// --- AAS ---

AasWindow initial_window(const AasConfig& cfg) { return {cfg.q_min, cfg.q_min + cfg.width()}; }

AasWindow update_window(const AasWindow& w, const AasConfig& cfg, Bytes emitted) {
    const Bytes width = cfg.width();
    AasWindow next = w;
    if (emitted >= w.q_high) {
        next.q_low += cfg.delta_a;
    } else if (emitted <= w.q_low) {
        next.q_low -= cfg.delta_a;
    }
    if (next.q_low < cfg.q_min) next.q_low = cfg.q_min;
    if (next.q_low + width > cfg.q_max) next.q_low = cfg.q_max - width;
    next.q_high = next.q_low + width;
    return next;
}

AasQueue::AasQueue(const AasConfig& cfg)
    : cfg_(cfg), window_(initial_window(cfg)), inner_(window_.q_high, cfg.max_period) {}

void AasQueue::slide(const std::vector<Batch>& emitted) {
    for (const auto& b : emitted) slide(b.bytes);
}

void AasQueue::slide(Bytes emitted) {
    window_ = update_window(window_, cfg_, emitted);
    inner_.set_threshold(window_.q_high);
}

std::vector<Batch> AasQueue::on_timer(SimTime now) {
    auto out = inner_.on_timer(now);
    slide(out);
    return out;
}

std::vector<Batch> AasQueue::on_packet(const Packet& p, SimTime now) {
    // The arrival is judged against the window in force after any due timer;
    // a size-triggered flush slides the window before the newcomer is placed.
    auto out = on_timer(now);
    if (auto b = inner_.flush_on_overflow(p.length, now)) {
        out.push_back(std::move(*b));
        slide(out.back().bytes);
    }
    auto more = inner_.on_packet(p, now);
    slide(more);
    out.insert(out.end(), std::make_move_iterator(more.begin()), std::make_move_iterator(more.end()));
    return out;
}

// --- edge assembler ---

EdgeAssembler::EdgeAssembler(NodeId node, AssemblerConfig cfg, BurstId* next_burst_id)
    : node_(node), cfg_(std::move(cfg)), next_burst_id_(next_burst_id) {}

AnyQueue& EdgeAssembler::queue_for(const QueueKey& key) {
    auto it = queues_.find(key);
    if (it != queues_.end()) return it->second;
    switch (cfg_.algorithm) {
        case Algorithm::FAP: return queues_.emplace(key, FapQueue(cfg_.period_threshold)).first->second;
        case Algorithm::FAS: return queues_.emplace(key, FasQueue(cfg_.size_threshold)).first->second;
        case Algorithm::MSMAP:
            return queues_.emplace(key, SizeTimeQueue(cfg_.size_threshold, cfg_.period_threshold)).first->second;
        case Algorithm::AAS: return queues_.emplace(key, AasQueue(cfg_.aas)).first->second;
        case Algorithm::PriorityAAS:
            if (key.class_index >= cfg_.priority.n_classes()) {
                throw std::out_of_range("class index " + std::to_string(key.class_index) +
                                        " outside priority class table");
            }
            return queues_
                .emplace(key, PriorityQueue(cfg_.priority.l_max[key.class_index], cfg_.priority.t_max[key.class_index]))
                .first->second;
    }
    throw std::logic_error("unreachable");
}

AssemblerOutput EdgeAssembler::wrap(const QueueKey& key, std::vector<Batch> batches) const {
    AssemblerOutput out;
    for (auto& b : batches) {
        Burst burst;
        burst.burst_id = (*next_burst_id_)++;
        burst.total_bytes = b.bytes;
        burst.class_index = key.class_index;
        burst.assembled_at = b.emitted_at;
        burst.source = node_;
        burst.dest = key.dest;
        burst.packets = std::move(b.packets);
        out.bursts.push_back(std::move(burst));
    }
    out.next_deadline = deadline(key);
    return out;
}

AssemblerOutput EdgeAssembler::on_packet(const Packet& p, SimTime now) {
    QueueKey key{p.class_index, p.dest};
    auto& q = queue_for(key);
    auto batches = std::visit([&](auto& queue) { return queue.on_packet(p, now); }, q);
    return wrap(key, std::move(batches));
}

AssemblerOutput EdgeAssembler::on_timer(const QueueKey& key, SimTime now) {
    auto it = queues_.find(key);
    if (it == queues_.end()) return {};
    auto batches = std::visit([&](auto& queue) { return queue.on_timer(now); }, it->second);
    return wrap(key, std::move(batches));
}

std::optional<SimTime> EdgeAssembler::deadline(const QueueKey& key) const {
    auto it = queues_.find(key);
    if (it == queues_.end()) return std::nullopt;
    return std::visit([](const auto& queue) { return queue.deadline(); }, it->second);
}

std::size_t EdgeAssembler::queued_packets() const {
    std::size_t n = 0;
    for (const auto& [key, q] : queues_) n += std::visit([](const auto& queue) { return queue.queue().size(); }, q);
    return n;
}

std::vector<Packet> EdgeAssembler::queued() const {
    std::vector<Packet> out;
    for (const auto& [key, q] : queues_) {
        const auto& pk = std::visit([](const auto& queue) -> const std::vector<Packet>& { return queue.queue().packets(); }, q);
        out.insert(out.end(), pk.begin(), pk.end());
    }
    return out;
}

}  // namespace obs
