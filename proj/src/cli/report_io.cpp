#include "obs/report_io.hpp"

#include <json.hpp>

#include <iomanip>
#include <sstream>

namespace obs {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json class_json(const ClassMetrics& c) {
    ordered_json j;
    j["generated"] = c.generated;
    j["delivered"] = c.delivered;
    j["lost"] = c.lost;
    j["queued"] = c.queued;
    j["in_flight"] = c.in_flight;
    j["mean_e2e_delay_us"] = c.mean_e2e_delay_us;
    j["mean_assembly_delay_us"] = c.mean_assembly_delay_us;
    return j;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string num(double v) {
    std::ostringstream ss;
    ss << std::setprecision(10) << v;
    return ss.str();
}

}  // namespace

std::string report_json(const MetricsReport& r) {
    ordered_json j;
    j["mode"] = r.mode;
    j["packets"] = {{"generated", r.generated}, {"delivered", r.delivered}, {"lost", r.lost},
                    {"queued", r.queued},       {"in_flight", r.in_flight}};
    j["lost_by_reason"] = ordered_json::object();
    for (const auto& [reason, n] : r.lost_by_reason) j["lost_by_reason"][reason] = n;
    j["loss_rate"] = r.loss_rate;
    j["delay_us"] = {{"mean_e2e", r.mean_e2e_delay_us},
                     {"p95_e2e", r.p95_e2e_delay_us},
                     {"mean_assembly", r.mean_assembly_delay_us}};
    ordered_json hist = ordered_json::array();
    for (const auto& [lo, n] : r.burst_size_histogram) hist.push_back({{"from_bytes", lo}, {"count", n}});
    j["bursts"] = {{"emitted", r.bursts_emitted},
                   {"delivered", r.bursts_delivered},
                   {"lost", r.bursts_lost},
                   {"mean_bytes", r.mean_burst_bytes},
                   {"size_histogram", hist},
                   {"interdeparture_cv", r.interdeparture_cv}};
    ordered_json links = ordered_json::object();
    for (const auto& [link, n] : r.link_byte_hops) links[link] = n;
    j["byte_hops"] = {{"total", r.total_byte_hops}, {"per_link", links}};
    j["recovery"] = {{"reroutes", r.reroutes},
                     {"ack_timeouts", r.ack_timeouts},
                     {"loss_of_light_events", r.loss_of_light_events},
                     {"recovery_time_us", r.recovery_time_us ? ordered_json(*r.recovery_time_us) : ordered_json()}};
    ordered_json classes = ordered_json::array();
    for (const auto& c : r.per_class) classes.push_back(class_json(c));
    j["per_class"] = classes;
    return j.dump(2) + "\n";
}

std::string class_csv(const MetricsReport& r) {
    std::ostringstream out;
    out << "class,generated,delivered,lost,queued,in_flight,mean_e2e_delay_us,mean_assembly_delay_us\n";
    for (std::size_t i = 0; i < r.per_class.size(); ++i) {
        const auto& c = r.per_class[i];
        out << i << ',' << c.generated << ',' << c.delivered << ',' << c.lost << ',' << c.queued << ','
            << c.in_flight << ',' << num(c.mean_e2e_delay_us) << ',' << num(c.mean_assembly_delay_us) << '\n';
    }
    return out.str();
}

std::string trace_csv(const std::vector<TraceRecord>& trace, const Topology& topo) {
    std::ostringstream out;
    out << "time_us,kind,node,peer,burst,detail\n";
    for (const auto& t : trace) {
        out << t.at.count() << ',' << to_string(t.kind) << ',';
        if (t.node) out << topo.name(*t.node);
        out << ',';
        if (t.peer) out << topo.name(*t.peer);
        out << ',';
        if (t.burst) out << *t.burst;
        out << ',' << csv_field(t.detail) << '\n';
    }
    return out.str();
}

std::string compare_csv(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << "assembler,generated,delivered,lost,queued,in_flight,loss_rate,mean_e2e_delay_us,p95_e2e_delay_us,"
           "mean_assembly_delay_us,bursts,mean_burst_bytes,interdeparture_cv\n";
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << csv_field(row.label) << ',' << r.generated << ',' << r.delivered << ',' << r.lost << ',' << r.queued
            << ',' << r.in_flight << ',' << num(r.loss_rate) << ',' << num(r.mean_e2e_delay_us) << ','
            << num(r.p95_e2e_delay_us) << ',' << num(r.mean_assembly_delay_us) << ',' << r.bursts_emitted << ','
            << num(r.mean_burst_bytes) << ',' << num(r.interdeparture_cv) << '\n';
    }
    return out.str();
}

std::string compare_table(const std::vector<CompareRow>& rows) {
    std::ostringstream out;
    out << std::left << std::setw(12) << "assembler" << std::right << std::setw(10) << "generated" << std::setw(10)
        << "queued" << std::setw(11) << "loss_rate" << std::setw(12) << "e2e_us" << std::setw(12) << "asm_us"
        << std::setw(9) << "bursts" << std::setw(12) << "mean_B" << std::setw(10) << "cv" << '\n';
    out << std::fixed;
    for (const auto& row : rows) {
        const auto& r = row.report;
        out << std::left << std::setw(12) << row.label << std::right << std::setw(10) << r.generated << std::setw(10)
            << r.queued << std::setw(11) << std::setprecision(4) << r.loss_rate << std::setw(12)
            << std::setprecision(1) << r.mean_e2e_delay_us << std::setw(12) << r.mean_assembly_delay_us
            << std::setw(9) << r.bursts_emitted << std::setw(12) << r.mean_burst_bytes << std::setw(10)
            << std::setprecision(4) << r.interdeparture_cv << '\n';
    }
    return out.str();
}

}  // namespace obs
