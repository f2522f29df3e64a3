#include <exception>

#include "obs/engine.hpp"

namespace obs {

std::vector<RunResult> run_sweep_serial(std::span<const ScenarioConfig> scenarios, const RunOptions& options) {
    std::vector<RunResult> results;
    results.reserve(scenarios.size());
    for (const auto& s : scenarios) results.push_back(run(s, options));
    return results;
}

std::vector<RunResult> run_sweep(std::span<const ScenarioConfig> scenarios, const RunOptions& options) {
    const auto n = static_cast<std::ptrdiff_t>(scenarios.size());
    std::vector<RunResult> results(scenarios.size());
    std::vector<std::exception_ptr> failures(scenarios.size());

#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            results[i] = run(scenarios[i], options);
        } catch (...) {
            failures[i] = std::current_exception();
        }
    }
    for (const auto& f : failures) {
        if (f) std::rethrow_exception(f);
    }
    return results;
}

}  // namespace obs
