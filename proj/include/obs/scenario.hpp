#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "obs/assembly.hpp"
#include "obs/protocol.hpp"
#include "obs/topology.hpp"

namespace obs {

struct LengthDistribution {
    enum class Kind { Fixed, Uniform };
    Kind kind = Kind::Fixed;
    Bytes min = 1000;
    Bytes max = 1000;

    friend bool operator==(const LengthDistribution&, const LengthDistribution&) = default;
};

struct ScriptedArrival {
    SimTime at{0};
    Bytes length = 0;

    friend bool operator==(const ScriptedArrival&, const ScriptedArrival&) = default;
};

// One (source, destination, class) stream. Poisson unless `script` is set.
struct TrafficStream {
    std::string src;
    std::string dst;
    std::size_t class_index = 0;
    double rate_pps = 10000.0;
    LengthDistribution length;
    std::vector<ScriptedArrival> script;

    bool scripted() const { return !script.empty(); }

    friend bool operator==(const TrafficStream&, const TrafficStream&) = default;
};

struct FaultWindow {
    std::string a;
    std::string b;
    SimTime fail{0};
    std::optional<SimTime> repair;

    friend bool operator==(const FaultWindow&, const FaultWindow&) = default;
};

enum class Mode { Restoration, Protection };

std::string_view to_string(Mode m);
std::optional<Mode> parse_mode(std::string_view s);

struct ScenarioConfig {
    std::vector<std::string> nodes;
    std::vector<LinkSpec> links;

    std::vector<TrafficStream> traffic;
    std::uint64_t traffic_seed = 1;

    AssemblerConfig assembler;
    std::map<std::string, AssemblerConfig> assembler_overrides;

    ProtocolConfig protocol;
    Mode mode = Mode::Restoration;
    std::vector<FaultWindow> faults;

    SimTime horizon{100000};  // traffic stops
    SimTime drain{10000};     // extra run time after the horizon
    Bytes histogram_bin = 1000;

    const AssemblerConfig& assembler_for(const std::string& node) const;

    friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

// All-or-nothing semantic validation. Each message starts with the field path.
std::vector<std::string> validate(const ScenarioConfig& cfg);

Topology build_topology(const ScenarioConfig& cfg);

// The built-in defaults, with the ten-node fixture and one FAP stream N1->N10.
ScenarioConfig default_scenario();

}  // namespace obs
