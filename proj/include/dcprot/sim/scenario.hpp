#pragma once

#include "dcprot/grid/types.hpp"

#include <set>
#include <string>
#include <vector>

namespace dcprot::sim {

/// One simulated case: a pre-fault outage condition, a fault, and the set of
/// relays forced inert to model protection failure.
struct Scenario {
    std::string name;
    grid::Contingency contingency;
    grid::FaultSpec fault;
    double fault_time_s = 0.005;
    std::set<std::string> adjacent_failure;
    double duration_s = 0.5;
    double sample_step_s = 1e-4;

    void validate(const grid::GridTopology& topo) const;
};

std::vector<Scenario> parse_scenarios(const std::string& text, const std::string& origin);
std::vector<Scenario> load_scenarios_file(const std::string& path);
std::string serialize_scenario(const Scenario& s);

} // namespace dcprot::sim
