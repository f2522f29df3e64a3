#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "obs/engine.hpp"

namespace obs {

// Report as pretty-printed JSON (two-space indent, keys in fixed order).
std::string report_json(const MetricsReport& report);

// One row per service class.
std::string class_csv(const MetricsReport& report);

// time_us,kind,node,peer,burst,detail
std::string trace_csv(const std::vector<TraceRecord>& trace, const Topology& topo);

struct CompareRow {
    std::string label;
    MetricsReport report;
};

// Side-by-side comparison as CSV and as an aligned text table.
std::string compare_csv(const std::vector<CompareRow>& rows);
std::string compare_table(const std::vector<CompareRow>& rows);

}  // namespace obs
