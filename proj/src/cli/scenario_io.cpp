#include "obs/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace obs {

namespace {

// Decimal literal split into digits and a power-of-ten scale: "1.25" -> (125, 2).
std::optional<std::pair<std::int64_t, int>> parse_decimal(std::string_view s) {
    if (s.empty()) return std::nullopt;
    std::int64_t mantissa = 0;
    int scale = 0;
    bool dot = false;
    bool digits = false;
    for (char c : s) {
        if (c == '.') {
            if (dot) return std::nullopt;
            dot = true;
            continue;
        }
        if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
        if (mantissa > (std::int64_t{1} << 50)) return std::nullopt;
        mantissa = mantissa * 10 + (c - '0');
        digits = true;
        if (dot) ++scale;
    }
    if (!digits) return std::nullopt;
    return std::make_pair(mantissa, scale);
}

std::optional<std::int64_t> scaled(std::string_view text, const std::vector<std::pair<std::string_view, std::int64_t>>& units) {
    auto trimmed = text;
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.back()))) trimmed.remove_suffix(1);
    while (!trimmed.empty() && std::isspace(static_cast<unsigned char>(trimmed.front()))) trimmed.remove_prefix(1);
    for (const auto& [suffix, factor] : units) {
        if (trimmed.size() <= suffix.size() || !trimmed.ends_with(suffix)) continue;
        auto number = trimmed.substr(0, trimmed.size() - suffix.size());
        while (!number.empty() && std::isspace(static_cast<unsigned char>(number.back()))) number.remove_suffix(1);
        auto dec = parse_decimal(number);
        if (!dec) return std::nullopt;
        std::int64_t denom = 1;
        for (int i = 0; i < dec->second; ++i) denom *= 10;
        std::int64_t value = dec->first * factor;
        if (value % denom != 0) return std::nullopt;
        return value / denom;
    }
    return std::nullopt;
}

}  // namespace

std::optional<SimTime> parse_duration(std::string_view text) {
    // Longest suffixes first so "ms" is not read as "s".
    auto v = scaled(text, {{"us", 1}, {"ms", 1000}, {"s", 1000000}});
    if (!v) return std::nullopt;
    return SimTime{*v};
}

std::optional<Bytes> parse_size(std::string_view text) {
    return scaled(text, {{"KB", 1000}, {"MB", 1000000}, {"B", 1}});
}

namespace {

std::string where(const YAML::Mark& mark) {
    if (mark.is_null()) return "";
    return " (line " + std::to_string(mark.line + 1) + ", column " + std::to_string(mark.column + 1) + ")";
}

// Walks the YAML tree collecting every error instead of stopping at the first.
class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void error(const std::string& path, const std::string& msg, const YAML::Node& node = YAML::Node()) {
        errors_.push_back(path + ": " + msg + (node.IsDefined() ? where(node.Mark()) : ""));
    }

    bool expect_map(const YAML::Node& node, const std::string& path) {
        if (node.IsMap()) return true;
        error(path, "expected a mapping", node);
        return false;
    }

    void allow_keys(const YAML::Node& map, const std::string& path, std::initializer_list<std::string_view> keys) {
        for (const auto& kv : map) {
            auto key = kv.first.as<std::string>();
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                error(path + "." + key, "unknown field", kv.first);
            }
        }
    }

    std::string string(const YAML::Node& node, const std::string& path) {
        if (!node.IsScalar()) {
            error(path, "expected a scalar", node);
            return {};
        }
        return node.Scalar();
    }

    void duration(const YAML::Node& map, const char* key, const std::string& path, SimTime& out) {
        if (!map[key]) return;
        auto node = map[key];
        auto v = node.IsScalar() ? parse_duration(node.Scalar()) : std::nullopt;
        if (!v) {
            error(path + "." + key, "expected a duration such as 100us, 2ms or 1s", node);
            return;
        }
        out = *v;
    }

    void size(const YAML::Node& map, const char* key, const std::string& path, Bytes& out) {
        if (!map[key]) return;
        out = size_value(map[key], path + "." + key).value_or(out);
    }

    std::optional<Bytes> size_value(const YAML::Node& node, const std::string& path) {
        auto v = node.IsScalar() ? parse_size(node.Scalar()) : std::nullopt;
        if (!v) error(path, "expected a size such as 1500B or 10KB", node);
        return v;
    }

    template <class T>
    void scalar(const YAML::Node& map, const char* key, const std::string& path, T& out) {
        if (!map[key]) return;
        auto node = map[key];
        try {
            if (!node.IsScalar()) throw YAML::BadConversion(node.Mark());
            out = node.as<T>();
        } catch (const YAML::Exception&) {
            error(path + "." + key, "invalid value '" + (node.IsScalar() ? node.Scalar() : std::string("<non-scalar>")) + "'",
                  node);
        }
    }

    template <class T, class F>
    void list(const YAML::Node& map, const char* key, const std::string& path, std::vector<T>& out, F&& item) {
        if (!map[key]) return;
        auto node = map[key];
        if (!node.IsSequence()) {
            error(path + "." + key, "expected a list", node);
            return;
        }
        out.clear();
        for (std::size_t i = 0; i < node.size(); ++i) {
            if (auto v = item(node[i], path + "." + key + "[" + std::to_string(i) + "]")) out.push_back(*v);
        }
    }

private:
    std::vector<std::string>& errors_;
};

void read_assembler(Reader& r, const YAML::Node& node, const std::string& path, AssemblerConfig& out, bool allow_nodes) {
    if (!r.expect_map(node, path)) return;
    if (allow_nodes) {
        r.allow_keys(node, path, {"algorithm", "period", "size", "aas", "priority", "nodes"});
    } else {
        r.allow_keys(node, path, {"algorithm", "period", "size", "aas", "priority"});
    }
    if (node["algorithm"]) {
        auto name = r.string(node["algorithm"], path + ".algorithm");
        if (auto a = parse_algorithm(name)) {
            out.algorithm = *a;
        } else {
            r.error(path + ".algorithm", "unknown algorithm '" + name + "' (FAP, FAS, MSMAP, AAS, PriorityAAS)",
                    node["algorithm"]);
        }
    }
    r.duration(node, "period", path, out.period_threshold);
    r.size(node, "size", path, out.size_threshold);
    if (auto aas = node["aas"]) {
        auto p = path + ".aas";
        if (r.expect_map(aas, p)) {
            r.allow_keys(aas, p, {"q_min", "q_max", "a", "delta_a", "max_period"});
            r.size(aas, "q_min", p, out.aas.q_min);
            r.size(aas, "q_max", p, out.aas.q_max);
            r.scalar(aas, "a", p, out.aas.a);
            r.size(aas, "delta_a", p, out.aas.delta_a);
            r.duration(aas, "max_period", p, out.aas.max_period);
        }
    }
    if (auto pri = node["priority"]) {
        auto p = path + ".priority";
        if (r.expect_map(pri, p)) {
            r.allow_keys(pri, p, {"destinations", "l_max", "t_max", "offset"});
            r.scalar(pri, "destinations", p, out.priority.m_destinations);
            r.list(pri, "l_max", p, out.priority.l_max,
                   [&](const YAML::Node& n, const std::string& ip) { return r.size_value(n, ip); });
            auto time_item = [&](const YAML::Node& n, const std::string& ip) -> std::optional<SimTime> {
                auto v = n.IsScalar() ? parse_duration(n.Scalar()) : std::nullopt;
                if (!v) r.error(ip, "expected a duration such as 100us", n);
                return v;
            };
            r.list(pri, "t_max", p, out.priority.t_max, time_item);
            r.list(pri, "offset", p, out.priority.offset, time_item);
        }
    }
}

std::optional<LinkSpec> read_link(Reader& r, const YAML::Node& n, const std::string& path) {
    LinkSpec spec;
    if (n.IsSequence()) {
        if (n.size() != 2) {
            r.error(path, "short link form is [a, b]", n);
            return std::nullopt;
        }
        spec.a = r.string(n[0], path + "[0]");
        spec.b = r.string(n[1], path + "[1]");
        return spec;
    }
    if (!r.expect_map(n, path)) return std::nullopt;
    r.allow_keys(n, path, {"a", "b", "weight", "delay"});
    if (!n["a"] || !n["b"]) {
        r.error(path, "link needs both a and b", n);
        return std::nullopt;
    }
    spec.a = r.string(n["a"], path + ".a");
    spec.b = r.string(n["b"], path + ".b");
    r.scalar(n, "weight", path, spec.weight);
    r.duration(n, "delay", path, spec.delay);
    return spec;
}

std::optional<TrafficStream> read_stream(Reader& r, const YAML::Node& n, const std::string& path) {
    if (!r.expect_map(n, path)) return std::nullopt;
    r.allow_keys(n, path, {"src", "dst", "class", "rate", "length", "arrivals"});
    TrafficStream s;
    if (!n["src"] || !n["dst"]) r.error(path, "stream needs src and dst", n);
    if (n["src"]) s.src = r.string(n["src"], path + ".src");
    if (n["dst"]) s.dst = r.string(n["dst"], path + ".dst");
    r.scalar(n, "class", path, s.class_index);
    r.scalar(n, "rate", path, s.rate_pps);
    if (auto len = n["length"]) {
        if (len.IsMap()) {
            r.allow_keys(len, path + ".length", {"min", "max"});
            s.length.kind = LengthDistribution::Kind::Uniform;
            r.size(len, "min", path + ".length", s.length.min);
            r.size(len, "max", path + ".length", s.length.max);
        } else if (auto v = r.size_value(len, path + ".length")) {
            s.length = {LengthDistribution::Kind::Fixed, *v, *v};
        }
    }
    r.list(n, "arrivals", path, s.script, [&](const YAML::Node& a, const std::string& ap) -> std::optional<ScriptedArrival> {
        if (!r.expect_map(a, ap)) return std::nullopt;
        r.allow_keys(a, ap, {"at", "length"});
        ScriptedArrival arr;
        if (!a["at"] || !a["length"]) {
            r.error(ap, "arrival needs at and length", a);
            return std::nullopt;
        }
        r.duration(a, "at", ap, arr.at);
        r.size(a, "length", ap, arr.length);
        return arr;
    });
    return s;
}

std::optional<FaultWindow> read_fault(Reader& r, const YAML::Node& n, const std::string& path) {
    if (!r.expect_map(n, path)) return std::nullopt;
    r.allow_keys(n, path, {"link", "fail", "repair"});
    FaultWindow f;
    auto link = n["link"];
    if (!link || !link.IsSequence() || link.size() != 2) {
        r.error(path + ".link", "expected [a, b]", link ? link : n);
        return std::nullopt;
    }
    f.a = r.string(link[0], path + ".link[0]");
    f.b = r.string(link[1], path + ".link[1]");
    if (!n["fail"]) r.error(path + ".fail", "required", n);
    r.duration(n, "fail", path, f.fail);
    if (n["repair"]) {
        SimTime repair{0};
        r.duration(n, "repair", path, repair);
        f.repair = repair;
    }
    return f;
}

void read_scenario(Reader& r, const YAML::Node& root, ScenarioConfig& cfg) {
    if (!r.expect_map(root, "scenario")) return;
    r.allow_keys(root, "scenario", {"topology", "traffic", "assembly", "protocol", "mode", "faults", "sim", "report"});

    auto topo = root["topology"];
    if (!topo) {
        r.error("topology", "required");
    } else if (topo.IsScalar() && topo.Scalar() == "figure1") {
        auto fig = default_scenario();
        cfg.nodes = fig.nodes;
        cfg.links = fig.links;
    } else if (r.expect_map(topo, "topology")) {
        r.allow_keys(topo, "topology", {"nodes", "links"});
        r.list(topo, "nodes", "topology", cfg.nodes,
               [&](const YAML::Node& n, const std::string& p) -> std::optional<std::string> { return r.string(n, p); });
        r.list(topo, "links", "topology", cfg.links,
               [&](const YAML::Node& n, const std::string& p) { return read_link(r, n, p); });
    }

    if (auto traffic = root["traffic"]; traffic && r.expect_map(traffic, "traffic")) {
        r.allow_keys(traffic, "traffic", {"seed", "streams"});
        r.scalar(traffic, "seed", "traffic", cfg.traffic_seed);
        r.list(traffic, "streams", "traffic", cfg.traffic,
               [&](const YAML::Node& n, const std::string& p) { return read_stream(r, n, p); });
    }

    if (auto assembly = root["assembly"]) {
        read_assembler(r, assembly, "assembly", cfg.assembler, true);
        if (assembly.IsMap() && assembly["nodes"]) {
            auto nodes = assembly["nodes"];
            if (r.expect_map(nodes, "assembly.nodes")) {
                for (const auto& kv : nodes) {
                    auto name = kv.first.as<std::string>();
                    AssemblerConfig override_cfg = cfg.assembler;
                    read_assembler(r, kv.second, "assembly.nodes." + name, override_cfg, false);
                    cfg.assembler_overrides[name] = override_cfg;
                }
            }
        }
    }

    if (auto proto = root["protocol"]; proto && r.expect_map(proto, "protocol")) {
        r.allow_keys(proto, "protocol", {"t_h", "t_s", "routing", "ga"});
        r.duration(proto, "t_h", "protocol", cfg.protocol.t_h);
        r.duration(proto, "t_s", "protocol", cfg.protocol.t_s);
        if (proto["routing"]) {
            auto name = r.string(proto["routing"], "protocol.routing");
            if (auto b = parse_backend(name)) {
                cfg.protocol.backend = *b;
            } else {
                r.error("protocol.routing", "expected exact or ga, got '" + name + "'", proto["routing"]);
            }
        }
        if (auto ga = proto["ga"]; ga && r.expect_map(ga, "protocol.ga")) {
            r.allow_keys(ga, "protocol.ga", {"population", "generations", "crossover", "mutation", "seed"});
            r.scalar(ga, "population", "protocol.ga", cfg.protocol.ga.population_size);
            r.scalar(ga, "generations", "protocol.ga", cfg.protocol.ga.generations);
            r.scalar(ga, "crossover", "protocol.ga", cfg.protocol.ga.crossover_rate);
            r.scalar(ga, "mutation", "protocol.ga", cfg.protocol.ga.mutation_rate);
            r.scalar(ga, "seed", "protocol.ga", cfg.protocol.ga.seed);
        }
    }

    if (root["mode"]) {
        auto name = r.string(root["mode"], "mode");
        if (auto m = parse_mode(name)) {
            cfg.mode = *m;
        } else {
            r.error("mode", "expected restoration or protection, got '" + name + "'", root["mode"]);
        }
    }

    if (root["faults"]) {
        r.list(root, "faults", "", cfg.faults, [&](const YAML::Node& n, const std::string& p) {
            return read_fault(r, n, p.substr(1));
        });
    }

    if (auto sim = root["sim"]; sim && r.expect_map(sim, "sim")) {
        r.allow_keys(sim, "sim", {"horizon", "drain"});
        r.duration(sim, "horizon", "sim", cfg.horizon);
        r.duration(sim, "drain", "sim", cfg.drain);
    }
    if (auto report = root["report"]; report && r.expect_map(report, "report")) {
        r.allow_keys(report, "report", {"histogram_bin"});
        r.size(report, "histogram_bin", "report", cfg.histogram_bin);
    }
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text) {
    YAML::Node root;
    try {
        root = YAML::Load(std::string(text));
    } catch (const YAML::ParserException& e) {
        throw ScenarioError({"syntax error at line " + std::to_string(e.mark.line + 1) + ", column " +
                             std::to_string(e.mark.column + 1) + ": " + e.msg});
    }
    ScenarioConfig cfg;
    cfg.nodes.clear();
    cfg.links.clear();
    cfg.traffic.clear();
    std::vector<std::string> errors;
    Reader reader(errors);
    read_scenario(reader, root, cfg);
    if (errors.empty()) errors = validate(cfg);
    if (!errors.empty()) throw ScenarioError(std::move(errors));
    return cfg;
}

namespace {

void emit_assembler(YAML::Emitter& out, const AssemblerConfig& a) {
    out << YAML::Key << "algorithm" << YAML::Value << std::string(to_string(a.algorithm));
    out << YAML::Key << "period" << YAML::Value << format_time(a.period_threshold);
    out << YAML::Key << "size" << YAML::Value << format_bytes(a.size_threshold);
    out << YAML::Key << "aas" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "q_min" << YAML::Value << format_bytes(a.aas.q_min);
    out << YAML::Key << "q_max" << YAML::Value << format_bytes(a.aas.q_max);
    out << YAML::Key << "a" << YAML::Value << a.aas.a;
    out << YAML::Key << "delta_a" << YAML::Value << format_bytes(a.aas.delta_a);
    out << YAML::Key << "max_period" << YAML::Value << format_time(a.aas.max_period);
    out << YAML::EndMap;
    out << YAML::Key << "priority" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "destinations" << YAML::Value << a.priority.m_destinations;
    out << YAML::Key << "l_max" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto v : a.priority.l_max) out << format_bytes(v);
    out << YAML::EndSeq;
    out << YAML::Key << "t_max" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto v : a.priority.t_max) out << format_time(v);
    out << YAML::EndSeq;
    out << YAML::Key << "offset" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (auto v : a.priority.offset) out << format_time(v);
    out << YAML::EndSeq;
    out << YAML::EndMap;
}

}  // namespace

std::string serialize_scenario(const ScenarioConfig& cfg) {
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;

    out << YAML::Key << "topology" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "nodes" << YAML::Value << YAML::Flow << cfg.nodes;
    out << YAML::Key << "links" << YAML::Value << YAML::BeginSeq;
    for (const auto& l : cfg.links) {
        out << YAML::Flow << YAML::BeginMap << YAML::Key << "a" << YAML::Value << l.a << YAML::Key << "b"
            << YAML::Value << l.b << YAML::Key << "weight" << YAML::Value << l.weight << YAML::Key << "delay"
            << YAML::Value << format_time(l.delay) << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "traffic" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "seed" << YAML::Value << cfg.traffic_seed;
    out << YAML::Key << "streams" << YAML::Value << YAML::BeginSeq;
    for (const auto& s : cfg.traffic) {
        out << YAML::BeginMap;
        out << YAML::Key << "src" << YAML::Value << s.src;
        out << YAML::Key << "dst" << YAML::Value << s.dst;
        out << YAML::Key << "class" << YAML::Value << s.class_index;
        out << YAML::Key << "rate" << YAML::Value << s.rate_pps;
        if (s.length.kind == LengthDistribution::Kind::Fixed) {
            out << YAML::Key << "length" << YAML::Value << format_bytes(s.length.min);
        } else {
            out << YAML::Key << "length" << YAML::Value << YAML::Flow << YAML::BeginMap << YAML::Key << "min"
                << YAML::Value << format_bytes(s.length.min) << YAML::Key << "max" << YAML::Value
                << format_bytes(s.length.max) << YAML::EndMap;
        }
        if (s.scripted()) {
            out << YAML::Key << "arrivals" << YAML::Value << YAML::BeginSeq;
            for (const auto& a : s.script) {
                out << YAML::Flow << YAML::BeginMap << YAML::Key << "at" << YAML::Value << format_time(a.at)
                    << YAML::Key << "length" << YAML::Value << format_bytes(a.length) << YAML::EndMap;
            }
            out << YAML::EndSeq;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndSeq << YAML::EndMap;

    out << YAML::Key << "assembly" << YAML::Value << YAML::BeginMap;
    emit_assembler(out, cfg.assembler);
    if (!cfg.assembler_overrides.empty()) {
        out << YAML::Key << "nodes" << YAML::Value << YAML::BeginMap;
        for (const auto& [node, a] : cfg.assembler_overrides) {
            out << YAML::Key << node << YAML::Value << YAML::BeginMap;
            emit_assembler(out, a);
            out << YAML::EndMap;
        }
        out << YAML::EndMap;
    }
    out << YAML::EndMap;

    out << YAML::Key << "protocol" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "t_h" << YAML::Value << format_time(cfg.protocol.t_h);
    out << YAML::Key << "t_s" << YAML::Value << format_time(cfg.protocol.t_s);
    out << YAML::Key << "routing" << YAML::Value << std::string(to_string(cfg.protocol.backend));
    out << YAML::Key << "ga" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "population" << YAML::Value << cfg.protocol.ga.population_size;
    out << YAML::Key << "generations" << YAML::Value << cfg.protocol.ga.generations;
    out << YAML::Key << "crossover" << YAML::Value << cfg.protocol.ga.crossover_rate;
    out << YAML::Key << "mutation" << YAML::Value << cfg.protocol.ga.mutation_rate;
    out << YAML::Key << "seed" << YAML::Value << cfg.protocol.ga.seed;
    out << YAML::EndMap << YAML::EndMap;

    out << YAML::Key << "mode" << YAML::Value << std::string(to_string(cfg.mode));

    out << YAML::Key << "faults" << YAML::Value << YAML::BeginSeq;
    for (const auto& f : cfg.faults) {
        out << YAML::Flow << YAML::BeginMap;
        out << YAML::Key << "link" << YAML::Value << YAML::Flow << YAML::BeginSeq << f.a << f.b << YAML::EndSeq;
        out << YAML::Key << "fail" << YAML::Value << format_time(f.fail);
        if (f.repair) out << YAML::Key << "repair" << YAML::Value << format_time(*f.repair);
        out << YAML::EndMap;
    }
    out << YAML::EndSeq;

    out << YAML::Key << "sim" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "horizon" << YAML::Value << format_time(cfg.horizon);
    out << YAML::Key << "drain" << YAML::Value << format_time(cfg.drain);
    out << YAML::EndMap;
    out << YAML::Key << "report" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "histogram_bin" << YAML::Value << format_bytes(cfg.histogram_bin);
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading " + path.string());
    return ss.str();
}

ScenarioConfig load_scenario(const std::filesystem::path& path) { return parse_scenario(read_file(path)); }

}  // namespace obs
