#pragma once

#include <cstddef>
#include <vector>

#include "obs/types.hpp"

namespace obs {

struct Packet {
    PacketId id = 0;
    Bytes length = 0;
    std::size_t class_index = 0;
    NodeId source;
    NodeId dest;
    SimTime created_at{0};

    friend bool operator==(const Packet&, const Packet&) = default;
};

// Burst data packet: packets of one (class, destination) queue, in arrival order.
struct Burst {
    BurstId burst_id = 0;
    std::vector<Packet> packets;
    Bytes total_bytes = 0;
    std::size_t class_index = 0;
    SimTime assembled_at{0};
    NodeId source;
    NodeId dest;
};

// Burst control packet. The first four fields are the on-wire header.
struct BurstHeader {
    BurstId burst_id = 0;
    NodeId successor;
    std::vector<NodeId> optimum_route;
    std::vector<NodeId> bypass_route;
    bool on_optimum = true;

    std::size_t class_index = 0;
    // Time between this header's arrival at the holder and its payload's arrival.
    SimTime offset{0};

    friend bool operator==(const BurstHeader&, const BurstHeader&) = default;
};

}  // namespace obs
