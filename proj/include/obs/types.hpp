#pragma once

#include <chrono>
#include <cstdint>
#include <string>

namespace obs {

// Simulation clock. Integer microseconds from simulation start.
using SimTime = std::chrono::microseconds;

using Bytes = std::int64_t;
using BurstId = std::uint64_t;
using PacketId = std::uint64_t;

// Dense index of a node in its Topology. Ordering follows declaration order.
struct NodeId {
    std::uint32_t value = 0;

    friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Unordered node pair, stored with lo < hi.
struct LinkKey {
    NodeId lo;
    NodeId hi;

    friend auto operator<=>(const LinkKey&, const LinkKey&) = default;
};

inline LinkKey make_link_key(NodeId a, NodeId b) {
    return a < b ? LinkKey{a, b} : LinkKey{b, a};
}

std::string format_time(SimTime t);
std::string format_bytes(Bytes b);

}  // namespace obs
