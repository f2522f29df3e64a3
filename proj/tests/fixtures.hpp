#pragma once

#include "obs/engine.hpp"

namespace fixtures {

inline obs::ScenarioConfig figure1(double rate_pps = 10000.0, obs::SimTime horizon = obs::SimTime{50000}) {
    auto cfg = obs::default_scenario();
    cfg.traffic.at(0).rate_pps = rate_pps;
    cfg.horizon = horizon;
    return cfg;
}

// figure1 with N6-N10 cut mid-run and never repaired.
inline obs::ScenarioConfig figure1_cut(obs::SimTime fail = obs::SimTime{20000}) {
    auto cfg = figure1();
    cfg.faults.push_back({"N6", "N10", fail, std::nullopt});
    return cfg;
}

// One packet every 200us from N1 to N10, FAP closing each alone after 100us; N6-N10 cut at 1000us.
inline obs::ScenarioConfig scripted_cut() {
    auto cfg = obs::default_scenario();
    auto& s = cfg.traffic.at(0);
    s.script.clear();
    for (std::int64_t t = 0; t < 3000; t += 200) s.script.push_back({obs::SimTime{t}, 1000});
    cfg.faults.push_back({"N6", "N10", obs::SimTime{1000}, std::nullopt});
    cfg.horizon = obs::SimTime{3000};
    cfg.drain = obs::SimTime{2000};
    return cfg;
}

}  // namespace fixtures
