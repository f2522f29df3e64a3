#pragma once

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "obs/packet.hpp"
#include "obs/routing.hpp"
#include "obs/topology.hpp"

namespace obs {

struct ProtocolConfig {
    SimTime t_h{10};  // per-node header processing
    SimTime t_s{50};  // ack timeout window
    RoutingBackend backend = RoutingBackend::Exact;
    GaConfig ga;

    std::vector<std::string> validate() const;

    friend bool operator==(const ProtocolConfig&, const ProtocolConfig&) = default;
};

enum class DropReason { LinkFailure, NoBypass, OffsetViolation, Malformed };

std::string_view to_string(DropReason r);

struct Forward {
    BurstHeader header;
};
struct Terminate {};
struct Reroute {
    BurstHeader header;
};
struct Drop {
    DropReason reason;
};

using HeaderAction = std::variant<Forward, Terminate, Reroute, Drop>;

std::string_view action_name(const HeaderAction& a);

struct NodeProtocolState {
    NodeId node;
    std::map<std::pair<BurstId, NodeId>, SimTime> pending_acks;
    std::set<LinkKey> known_down_links;

    bool suspects(NodeId a, NodeId b) const { return known_down_links.contains(make_link_key(a, b)); }
};

// Header rules run by the node named in the successor field.
//
// flag 1: the next optimum hop goes into the successor field, or Terminate at
// the destination. When that hop is a suspected link the node toggles the
// flag, stores a bypass towards the unreachable hop, and names the bypass's
// first hop as successor.
// flag 0: the next bypass hop goes into the successor field; the second-last
// bypass node sets the flag back to 1 so the rejoin node resumes the optimum
// route.
//
// Bypasses are computed on this node's view of the network: every link it
// suspects is out of service and nodes the burst has already visited are
// avoided. If no such path reaches the rejoin node the search targets the
// destination instead, and finally drops the visited-node restriction.
HeaderAction process_header(const NodeProtocolState& state, BurstHeader header, const Topology& topo,
                            const ProtocolConfig& cfg);

void arm_ack_timer(NodeProtocolState& state, BurstId burst, NodeId successor, SimTime now, const ProtocolConfig& cfg);

// True when the ack matched a pending entry; false for late or unknown acks.
bool acknowledge(NodeProtocolState& state, BurstId burst, NodeId from);

// Marks the link suspected when the entry is still pending at its deadline.
std::optional<LinkKey> on_ack_timeout(NodeProtocolState& state, BurstId burst, NodeId successor, SimTime now);

// Link repair rehabilitates a suspected link.
void on_link_repair(NodeProtocolState& state, LinkKey link);

// t_h + t_s plus the class's configured offset (0 when no table is given).
SimTime compute_offset(const ProtocolConfig& cfg, std::size_t class_index, std::span<const SimTime> class_offsets = {});

struct LossOfLightRecord {
    SimTime at{0};
    NodeId node;
    LinkKey link;

    friend bool operator==(const LossOfLightRecord&, const LossOfLightRecord&) = default;
};

// Passive monitor on a node's data ports: records Up->Down transitions of
// adjacent links and nothing else.
class LossOfLightMonitor {
public:
    explicit LossOfLightMonitor(NodeId node) : node_(node) {}

    std::optional<LossOfLightRecord> observe(LinkKey link, LinkState state, SimTime now);
    const std::vector<LossOfLightRecord>& records() const { return records_; }

private:
    NodeId node_;
    std::map<LinkKey, LinkState> last_;
    std::vector<LossOfLightRecord> records_;
};

}  // namespace obs
