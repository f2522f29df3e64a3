#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace obs {

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 1;
inline constexpr int kExitRuntime = 2;

struct RunArgs {
    std::filesystem::path scenario;
    std::optional<std::filesystem::path> output;  // JSON report; a .classes.csv sibling is written too
    std::optional<std::filesystem::path> trace;
    std::optional<std::uint64_t> seed;
};

struct CompareArgs {
    std::filesystem::path scenario;
    std::vector<std::string> assemblers;
    std::optional<std::filesystem::path> output;  // CSV table
    std::optional<std::uint64_t> seed;
};

struct PathsArgs {
    std::filesystem::path scenario;
    std::string src;
    std::string dst;
    std::size_t max_hops = 8;
    std::optional<std::uint64_t> seed;
};

// Each command reports on `out`, diagnostics on `err`, and returns an exit code.
int cmd_run(const RunArgs& args, std::ostream& out, std::ostream& err);
int cmd_compare(const CompareArgs& args, std::ostream& out, std::ostream& err);
int cmd_paths(const PathsArgs& args, std::ostream& out, std::ostream& err);
int cmd_print_defaults(std::ostream& out);

}  // namespace obs
