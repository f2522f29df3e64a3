#include "obs/commands.hpp"

#include <fstream>
#include <ostream>

#include "obs/engine.hpp"
#include "obs/report_io.hpp"
#include "obs/routing.hpp"
#include "obs/scenario_io.hpp"

namespace obs {

namespace {

void apply_seed(ScenarioConfig& cfg, const std::optional<std::uint64_t>& seed) {
    if (!seed) return;
    cfg.traffic_seed = *seed;
    cfg.protocol.ga.seed = *seed;
}

// Writes through a temporary sibling so a failed write never leaves a partial file.
void write_file(const std::filesystem::path& path, const std::string& content) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw IoError("cannot write " + path.string());
        f << content;
        f.flush();
        if (!f) throw IoError("error writing " + path.string());
    }
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot write " + path.string());
    }
}

std::filesystem::path classes_path(const std::filesystem::path& report) {
    auto p = report;
    p.replace_extension(".classes.csv");
    return p;
}

template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ScenarioError& e) {
        for (const auto& msg : e.errors()) err << "error: " << msg << '\n';
        return kExitValidation;
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
}

}  // namespace

int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_scenario(args.scenario);
        apply_seed(cfg, args.seed);
        if (args.seed) {
            if (auto errors = validate(cfg); !errors.empty()) throw ScenarioError(errors);
        }
        auto result = run(cfg, RunOptions{.trace = args.trace.has_value()});
        auto json = report_json(result.report);
        if (args.output) {
            write_file(*args.output, json);
            write_file(classes_path(*args.output), class_csv(result.report));
        } else {
            out << json;
        }
        if (args.trace) write_file(*args.trace, trace_csv(result.trace, result.topology));
        return kExitOk;
    });
}

int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err) {
    if (args.assemblers.empty()) {
        err << "error: compare needs at least one assembler (FAP, FAS, MSMAP, AAS, PriorityAAS)\n";
        return kExitValidation;
    }
    std::vector<Algorithm> algorithms;
    for (const auto& name : args.assemblers) {
        auto a = parse_algorithm(name);
        if (!a) {
            err << "error: unknown assembler '" << name << "'\n";
            return kExitValidation;
        }
        algorithms.push_back(*a);
    }
    return guarded(err, [&] {
        auto base = load_scenario(args.scenario);
        apply_seed(base, args.seed);
        std::vector<ScenarioConfig> scenarios;
        std::vector<std::string> errors;
        for (auto a : algorithms) {
            auto cfg = base;
            cfg.assembler.algorithm = a;
            for (auto& [node, o] : cfg.assembler_overrides) o.algorithm = a;
            for (const auto& e : validate(cfg)) errors.push_back(std::string(to_string(a)) + ": " + e);
            scenarios.push_back(std::move(cfg));
        }
        if (!errors.empty()) throw ScenarioError(errors);

        auto results = run_sweep(scenarios);
        std::vector<CompareRow> rows;
        for (std::size_t i = 0; i < results.size(); ++i) {
            rows.push_back({std::string(to_string(algorithms[i])), results[i].report});
        }
        out << compare_table(rows);
        if (args.output) write_file(*args.output, compare_csv(rows));
        return kExitOk;
    });
}

int cmd_paths(const PathsArgs& args, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        auto cfg = load_scenario(args.scenario);
        apply_seed(cfg, args.seed);
        auto topo = build_topology(cfg);
        std::vector<std::string> errors;
        if (!topo.find_node(args.src)) errors.push_back("src: unknown node '" + args.src + "'");
        if (!topo.find_node(args.dst)) errors.push_back("dst: unknown node '" + args.dst + "'");
        if (!errors.empty()) throw ScenarioError(errors);

        auto src = topo.node(args.src);
        auto dst = topo.node(args.dst);
        auto exact = exact_shortest_path(topo, src, dst);
        if (!exact) {
            out << "no path from " << args.src << " to " << args.dst << '\n';
            return kExitOk;
        }
        out << "exact: " << format_path(topo, *exact) << '\n';
        if (auto ga = ga_shortest_path(topo, src, dst, cfg.protocol.ga)) {
            out << "ga (seed " << cfg.protocol.ga.seed << "): " << format_path(topo, *ga) << '\n';
        } else {
            out << "ga (seed " << cfg.protocol.ga.seed << "): no path found\n";
        }
        auto all = simple_paths(topo, src, dst, args.max_hops);
        out << "simple paths (max " << args.max_hops << " hops): " << all.size() << '\n';
        for (const auto& p : all) out << "  " << format_path(topo, p) << '\n';
        return kExitOk;
    });
}

int cmd_print_defaults(std::ostream& out) {
    out << serialize_scenario(default_scenario());
    return kExitOk;
}

}  // namespace obs
