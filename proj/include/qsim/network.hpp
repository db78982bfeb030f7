#ifndef QSIM_NETWORK_HPP
#define QSIM_NETWORK_HPP

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsim/rsvp.hpp"
#include "qsim/scenario.hpp"
#include "qsim/scheduler.hpp"

namespace qsim {

// Runtime topology: nodes, directed link egresses with their schedulers,
// and hop-count static routes (loop-free by construction, re-validated at
// build). Queueing for the study happens at router egresses; host and
// switch egresses run a plain FIFO that the scenarios never congest.
class Network : public RsvpNet {
public:
    struct Egress {
        std::string from;
        std::string to;
        std::string id; // "from->to"
        std::uint64_t rate_bps = 0;
        double propagation_delay_s = 0.0;
        std::unique_ptr<Scheduler> sched;
        bool transmitting = false;
    };

    explicit Network(const ScenarioConfig& cfg);

    // Replaces every router egress scheduler S with rsvp(S) so granted,
    // conforming flows ride the guaranteed queue.
    void wrap_router_egresses(RsvpAgent& agent, std::size_t guaranteed_capacity_pkts);

    bool has_node(const std::string& id) const;
    NodeKind node_kind(const std::string& id) const;

    std::optional<std::string> next_hop(const std::string& node,
                                        const std::string& dest) const;

    std::size_t egress_index(const std::string& from, const std::string& to) const;
    Egress& egress(std::size_t index) { return egresses_[index]; }
    const std::vector<Egress>& egresses() const { return egresses_; }
    std::vector<Egress>& egresses() { return egresses_; }

    // Unloaded end-to-end floor: sum of per-hop serialization plus
    // propagation for a packet of the given size.
    double path_lower_bound_s(const std::string& from, const std::string& to,
                              std::uint64_t size_bits) const;

    // RsvpNet
    std::vector<std::string> path_nodes(const std::string& from,
                                        const std::string& to) const override;
    bool is_router(const std::string& node) const override;
    std::uint64_t egress_rate_bps(const std::string& node,
                                  const std::string& next_hop) const override;

private:
    void build_routes();
    void validate_routes() const;
    std::unique_ptr<Scheduler> build_scheduler(const SchedulerConfig& cfg,
                                               std::uint64_t link_rate_bps) const;

    SchedulerConfig scheduler_cfg_;
    std::map<std::string, NodeKind> nodes_;
    std::map<std::string, std::vector<std::string>> adjacency_; // sorted neighbors
    std::vector<Egress> egresses_;
    std::map<std::string, std::map<std::string, std::size_t>> egress_by_pair_;
    // next_hop_[node][dest]
    std::map<std::string, std::map<std::string, std::string>> next_hop_;
};

// Builds the scheduler a router egress of `link_rate_bps` would get under
// this config; exposed for tests that drive disciplines directly.
std::unique_ptr<Scheduler> make_scheduler(const SchedulerConfig& cfg,
                                          std::uint64_t link_rate_bps);

} // namespace qsim

#endif // QSIM_NETWORK_HPP
