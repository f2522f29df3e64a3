#include <CLI11.hpp>

#include <iostream>

#include "obs/commands.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Optical burst switching simulator"};
    app.require_subcommand(1);

    obs::RunArgs run_args;
    std::string run_output;
    std::string run_trace;
    std::uint64_t run_seed = 0;
    auto* run = app.add_subcommand("run", "Simulate a scenario and write its metrics report");
    run->add_option("scenario", run_args.scenario, "Scenario YAML")->required();
    auto* run_out_opt = run->add_option("--output,-o", run_output, "Report JSON path (stdout if absent)");
    auto* run_trace_opt = run->add_option("--trace", run_trace, "Write a per-event trace CSV");
    auto* run_seed_opt = run->add_option("--seed", run_seed, "Override traffic and GA seeds");

    obs::CompareArgs cmp_args;
    std::string cmp_output;
    std::uint64_t cmp_seed = 0;
    auto* compare = app.add_subcommand("compare", "Run one scenario under several assemblers");
    compare->add_option("scenario", cmp_args.scenario, "Scenario YAML")->required();
    compare->add_option("--assemblers,-a", cmp_args.assemblers, "FAP FAS MSMAP AAS PriorityAAS");
    auto* cmp_out_opt = compare->add_option("--output,-o", cmp_output, "Comparison CSV path");
    auto* cmp_seed_opt = compare->add_option("--seed", cmp_seed, "Override traffic and GA seeds");

    obs::PathsArgs paths_args;
    std::uint64_t paths_seed = 0;
    auto* paths = app.add_subcommand("paths", "List exact, GA and simple paths between two nodes");
    paths->add_option("scenario", paths_args.scenario, "Scenario YAML")->required();
    paths->add_option("src", paths_args.src, "Source node")->required();
    paths->add_option("dst", paths_args.dst, "Destination node")->required();
    paths->add_option("--max-hops", paths_args.max_hops, "Hop bound for the enumeration")->capture_default_str();
    auto* paths_seed_opt = paths->add_option("--seed", paths_seed, "GA seed");

    auto* defaults = app.add_subcommand("print-defaults", "Print the built-in default scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? obs::kExitOk : obs::kExitValidation;
    }

    if (run->parsed()) {
        if (*run_out_opt) run_args.output = run_output;
        if (*run_trace_opt) run_args.trace = run_trace;
        if (*run_seed_opt) run_args.seed = run_seed;
        return obs::cmd_run(run_args, std::cout, std::cerr);
    }
    if (compare->parsed()) {
        if (*cmp_out_opt) cmp_args.output = cmp_output;
        if (*cmp_seed_opt) cmp_args.seed = cmp_seed;
        return obs::cmd_compare(cmp_args, std::cout, std::cerr);
    }
    if (paths->parsed()) {
        if (*paths_seed_opt) paths_args.seed = paths_seed;
        return obs::cmd_paths(paths_args, std::cout, std::cerr);
    }
    if (defaults->parsed()) return obs::cmd_print_defaults(std::cout);
    return obs::kExitValidation;
}
