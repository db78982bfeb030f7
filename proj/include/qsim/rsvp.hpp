#ifndef QSIM_RSVP_HPP
#define QSIM_RSVP_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qsim/scheduler.hpp"
#include "qsim/time.hpp"
#include "qsim/token_bucket.hpp"

namespace qsim {

struct TrafficSpec {
    double rate_bps = 0.0;
    std::uint64_t burst_bytes = 0;
};

// Sender-originated advertisement of a flow; routers along the path append
// themselves to the hop list and install soft path state.
struct PathMsg {
    std::uint32_t flow_id = 0;
    TrafficSpec tspec;
    std::string sender;
    std::string receiver;
    std::vector<std::string> hops; // routers traversed, in forward order
};

// Receiver-originated reservation request traveling back along the path.
struct ResvMsg {
    std::uint32_t flow_id = 0;
    TrafficSpec tspec; // rate must not exceed the advertised PATH rate
    std::vector<std::string> reverse_hops;
};

// Minimal view of the topology the signaling agent needs.
class RsvpNet {
public:
    virtual ~RsvpNet() = default;
    // Full node sequence from `from` to `to` including both endpoints,
    // empty if unroutable.
    virtual std::vector<std::string> path_nodes(const std::string& from,
                                                const std::string& to) const = 0;
    virtual bool is_router(const std::string& node) const = 0;
    virtual std::uint64_t egress_rate_bps(const std::string& node,
                                          const std::string& next_hop) const = 0;
};

enum class AdmissionOutcome { Accepted, RejectedCapacity, RejectedNoPathState };

const char* admission_outcome_name(AdmissionOutcome outcome);

struct PathResult {
    bool delivered = false;
    std::vector<std::string> router_hops; // hop list as seen by the receiver
    std::string error;
};

struct ResvResult {
    AdmissionOutcome outcome = AdmissionOutcome::Accepted;
    std::string rejecting_router; // set when the request was rejected
};

// Soft-state PATH/RESV signaling with per-link admission control. State
// not refreshed within `timeout_periods` refresh periods expires; a flow
// is granted only while every router on its path holds its reservation.
class RsvpAgent {
public:
    struct Config {
        double reservable_fraction = 0.75;
        double refresh_period_s = 30.0;
        int timeout_periods = 3;
    };

    explicit RsvpAgent(const RsvpNet& net);
    RsvpAgent(const RsvpNet& net, Config cfg);

    // Walks the forwarding path, installing path state with a refresh
    // deadline at each router. Repeats refresh existing state.
    PathResult propagate_path(PathMsg msg, SimTime now);

    // Admission decision for one router. Accepted reservations are
    // installed on the router's egress toward the flow's receiver.
    ResvResult process_resv(const ResvMsg& msg, const std::string& router, SimTime now);

    // Carries a RESV from the receiver back toward the sender. On any
    // rejection the flow's partially installed reservations are released
    // and the outcome names the rejecting router.
    ResvResult send_resv(const ResvMsg& msg, SimTime now);

    // Drops every piece of state whose refresh deadline has passed.
    void expire(SimTime now);

    // Releases all reservations of a flow (path state stays soft).
    void release(std::uint32_t flow_id);

    // True while every router on the flow's path holds an unexpired grant.
    bool flow_granted(std::uint32_t flow_id, SimTime now) const;

    // Policer decision at one egress: true iff the flow is granted
    // end-to-end and the packet conforms to its token bucket.
    bool classify_guaranteed(const std::string& router, std::uint32_t flow_id,
                             std::uint64_t size_bits, SimTime now);

    // Sum of reserved rates on the egress link `router` -> `next_hop`.
    double reserved_bps(const std::string& router, const std::string& next_hop) const;

    double reservable_limit_bps(const std::string& router,
                                const std::string& next_hop) const;

    bool has_path_state(const std::string& router, std::uint32_t flow_id) const;
    bool has_reservation(const std::string& router, std::uint32_t flow_id) const;

    const Config& config() const { return cfg_; }

private:
    struct PathState {
        PathMsg msg;
        std::string next_hop; // toward the receiver (data direction)
        SimTime expires_at;
    };

    struct Grant {
        TrafficSpec tspec;
        std::string next_hop;
        std::unique_ptr<TokenBucket> bucket;
        SimTime expires_at;
    };

    SimTime deadline(SimTime now) const;

    const RsvpNet& net_;
    Config cfg_;
    // router -> flow -> state
    std::map<std::string, std::map<std::uint32_t, PathState>> path_state_;
    std::map<std::string, std::map<std::uint32_t, Grant>> grants_;
};

// Egress scheduler for reserved service: granted, conforming packets go to
// a guaranteed FIFO served with strict priority; everything else (including
// a reserved flow's excess) is demoted to the best-effort scheduler.
class RsvpScheduler : public Scheduler {
public:
    RsvpScheduler(std::unique_ptr<Scheduler> best_effort, RsvpAgent& agent,
                  std::string router, std::size_t capacity_pkts = 64);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

private:
    std::unique_ptr<Scheduler> best_effort_;
    RsvpAgent& agent_;
    std::string router_;
    std::size_t capacity_;
    std::deque<Packet> guaranteed_;
    std::string name_;
};

} // namespace qsim

#endif // QSIM_RSVP_HPP
