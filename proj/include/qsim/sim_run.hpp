#ifndef QSIM_SIM_RUN_HPP
#define QSIM_SIM_RUN_HPP

#include <string>
#include <vector>

#include "qsim/event.hpp"
#include "qsim/metrics.hpp"
#include "qsim/scenario.hpp"

namespace qsim {

struct FlowInfo {
    std::uint32_t flow_id = 0;
    std::string name;
    std::string from;
    std::string to;
    TrafficClassKind cls = TrafficClassKind::Data;
};

struct RunOutput {
    std::vector<PacketRecord> records;
    std::vector<FlowInfo> flows;
    RunSummary engine;
    std::vector<std::string> log;   // signaling outcomes and run notes
    std::vector<TraceEntry> trace;  // populated when tracing is requested
};

// Executes one scenario to completion: builds the network, wires sources
// and (optionally) RSVP signaling, runs the event loop for the configured
// duration and returns the per-packet fate log.
RunOutput run_scenario(const ScenarioConfig& cfg, bool trace = false);

} // namespace qsim

#endif // QSIM_SIM_RUN_HPP
