#ifndef QSIM_SCENARIO_HPP
#define QSIM_SCENARIO_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsim/traffic.hpp"

namespace qsim {

enum class NodeKind { Host, Switch, Router };

const char* node_kind_name(NodeKind kind);
std::optional<NodeKind> node_kind_from_name(const std::string& name);

struct NodeSpec {
    std::string id;
    NodeKind kind = NodeKind::Host;
};

struct LinkSpec {
    std::string a;
    std::string b;
    std::uint64_t rate_bps = 0;
    double propagation_delay_s = 0.001;
};

// Egress discipline for router nodes. Host and switch egresses always run
// plain FIFO; the bottleneck behavior under study lives at the routers.
struct SchedulerConfig {
    std::string kind = "fifo"; // fifo|pq|cq|cq_llq|wfq|wfq_llq|pwfq_rr
    std::size_t capacity_pkts = 64;

    // Class names per internal queue; for pq the order is the service
    // priority (first queue drained first).
    std::vector<std::vector<std::string>> queues{{"voice"}, {"video"}, {"data"}};
    std::vector<double> weights{1.0, 1.0, 1.0};      // wfq: one per queue
    std::vector<double> quanta_bytes{1500.0, 1500.0, 1500.0}; // cq: one per queue
    double base_quantum_bytes = 1500.0;
    std::vector<std::string> llq_classes{"voice"};

    std::vector<double> pwfq_weights{3.0, 2.0, 1.0};
    std::vector<std::vector<double>> pwfq_priorities{{1.0}, {1.0}, {1.0}};
    double pwfq_base_slice_s = 0.020;
    std::map<std::string, std::pair<std::size_t, std::size_t>> pwfq_classes{
        {"voice", {0, 0}}, {"video", {1, 0}}, {"data", {2, 0}}};
};

struct RsvpConfig {
    bool enabled = false;
    double reservable_fraction = 0.75;
    double refresh_period_s = 30.0;
    int timeout_periods = 3;
    std::uint32_t bucket_depth_pkts = 4;

    struct Reservation {
        std::string source_name;
        double rate_bps = 0.0;
        std::uint64_t burst_bytes = 0;
    };
    std::vector<Reservation> reservations;
};

struct RunConfig {
    double duration_s = 120.0;
    std::uint64_t seed = 1;
    double bucket_s = 1.0;
    // Seeded per-source start offset in [0, phase_jitter_s); gives the
    // deterministic sources seed-dependent phases.
    double phase_jitter_s = 0.02;
};

struct ScenarioConfig {
    std::string name = "custom";
    std::vector<NodeSpec> nodes;
    std::vector<LinkSpec> links;
    std::vector<SourceSpec> sources;
    SchedulerConfig scheduler;
    RsvpConfig rsvp;
    RunConfig run;

    void validate() const;
};

// Scheduler kinds a scenario supports, in the sweep order used by
// --all-schedulers.
std::vector<std::string> scenario_scheduler_choices(int scenario);

struct ScenarioOverrides {
    std::optional<std::string> scheduler;
    std::optional<std::uint64_t> seed;
    std::optional<double> duration_s;
    std::optional<bool> rsvp_enabled;
    std::optional<double> bucket_s;
};

// The three built-in studies: a 56 Kbps PPP bottleneck carrying voice,
// video and data; a 1.544 Mbps link with an optionally reserved voice
// flow; and four video client/server pairs over a 1 Mbps link.
ScenarioConfig build_scenario(int scenario, const ScenarioOverrides& overrides = {});

std::string scenario_to_json(const ScenarioConfig& cfg, int indent = 2);
ScenarioConfig scenario_from_json(const std::string& text);
ScenarioConfig load_scenario_file(const std::string& path);

} // namespace qsim

#endif // QSIM_SCENARIO_HPP
