#include "qsim/rsvp.hpp"

#include <stdexcept>
#include <utility>

namespace qsim {

const char* admission_outcome_name(AdmissionOutcome outcome) {
    switch (outcome) {
    case AdmissionOutcome::Accepted:
        return "accepted";
    case AdmissionOutcome::RejectedCapacity:
        return "rejected_capacity";
    case AdmissionOutcome::RejectedNoPathState:
        return "rejected_no_path_state";
    }
    return "accepted";
}

RsvpAgent::RsvpAgent(const RsvpNet& net) : RsvpAgent(net, Config{}) {}

RsvpAgent::RsvpAgent(const RsvpNet& net, Config cfg) : net_(net), cfg_(cfg) {
    if (cfg_.reservable_fraction <= 0.0 || cfg_.reservable_fraction > 1.0) {
        throw std::invalid_argument("RsvpAgent: reservable fraction in (0, 1] required");
    }
    if (cfg_.refresh_period_s <= 0.0 || cfg_.timeout_periods <= 0) {
        throw std::invalid_argument("RsvpAgent: refresh parameters must be positive");
    }
}

SimTime RsvpAgent::deadline(SimTime now) const {
    return now + SimTime::seconds(cfg_.refresh_period_s * cfg_.timeout_periods);
}

PathResult RsvpAgent::propagate_path(PathMsg msg, SimTime now) {
    if (msg.tspec.rate_bps <= 0.0) {
        throw std::invalid_argument("PathMsg: requested rate must be positive");
    }
    PathResult result;
    const auto nodes = net_.path_nodes(msg.sender, msg.receiver);
    if (nodes.empty()) {
        result.error = "no route from " + msg.sender + " to " + msg.receiver;
        return result;
    }
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        if (!net_.is_router(nodes[i])) {
            continue;
        }
        msg.hops.push_back(nodes[i]);
        PathState state;
        state.next_hop = nodes[i + 1]; // routers never terminate a path
        state.expires_at = deadline(now);
        state.msg = msg;
        path_state_[nodes[i]].insert_or_assign(msg.flow_id, std::move(state));
    }
    result.delivered = true;
    result.router_hops = msg.hops;
    return result;
}

ResvResult RsvpAgent::process_resv(const ResvMsg& msg, const std::string& router,
                                   SimTime now) {
    if (msg.tspec.rate_bps <= 0.0) {
        throw std::invalid_argument("ResvMsg: requested rate must be positive");
    }
    auto router_states = path_state_.find(router);
    if (router_states == path_state_.end() ||
        router_states->second.find(msg.flow_id) == router_states->second.end()) {
        return {AdmissionOutcome::RejectedNoPathState, router};
    }
    const PathState& path = router_states->second.at(msg.flow_id);
    if (msg.tspec.rate_bps > path.msg.tspec.rate_bps) {
        throw std::invalid_argument("ResvMsg: rate exceeds the advertised PATH rate");
    }

    const double limit = reservable_limit_bps(router, path.next_hop);
    double others = 0.0;
    auto& router_grants = grants_[router];
    for (const auto& [flow, grant] : router_grants) {
        if (flow != msg.flow_id && grant.next_hop == path.next_hop) {
            others += grant.tspec.rate_bps;
        }
    }
    if (others + msg.tspec.rate_bps > limit) {
        return {AdmissionOutcome::RejectedCapacity, router};
    }

    auto existing = router_grants.find(msg.flow_id);
    if (existing != router_grants.end()) {
        // Refresh: keep the policer state, extend the deadline.
        existing->second.tspec = msg.tspec;
        existing->second.expires_at = deadline(now);
    } else {
        Grant grant;
        grant.tspec = msg.tspec;
        grant.next_hop = path.next_hop;
        grant.bucket = std::make_unique<TokenBucket>(
            msg.tspec.rate_bps, static_cast<double>(msg.tspec.burst_bytes) * 8.0, now);
        grant.expires_at = deadline(now);
        router_grants.insert_or_assign(msg.flow_id, std::move(grant));
    }
    return {AdmissionOutcome::Accepted, ""};
}

ResvResult RsvpAgent::send_resv(const ResvMsg& msg, SimTime now) {
    // reverse_hops lists routers receiver-first; the request walks them
    // back toward the sender.
    for (const auto& router : msg.reverse_hops) {
        ResvResult step = process_resv(msg, router, now);
        if (step.outcome != AdmissionOutcome::Accepted) {
            // Rejection terminates signaling; nothing partial survives.
            release(msg.flow_id);
            return step;
        }
    }
    return {AdmissionOutcome::Accepted, ""};
}

void RsvpAgent::expire(SimTime now) {
    for (auto& [router, flows] : path_state_) {
        std::erase_if(flows, [&](const auto& kv) { return kv.second.expires_at <= now; });
    }
    for (auto& [router, flows] : grants_) {
        std::erase_if(flows, [&](const auto& kv) { return kv.second.expires_at <= now; });
    }
}

void RsvpAgent::release(std::uint32_t flow_id) {
    for (auto& [router, flows] : grants_) {
        flows.erase(flow_id);
    }
}

bool RsvpAgent::flow_granted(std::uint32_t flow_id, SimTime now) const {
    bool anywhere = false;
    for (const auto& [router, flows] : path_state_) {
        auto path = flows.find(flow_id);
        if (path == flows.end()) {
            continue;
        }
        anywhere = true;
        auto router_grants = grants_.find(router);
        if (router_grants == grants_.end()) {
            return false;
        }
        auto grant = router_grants->second.find(flow_id);
        if (grant == router_grants->second.end() || grant->second.expires_at <= now) {
            return false;
        }
    }
    return anywhere;
}

bool RsvpAgent::classify_guaranteed(const std::string& router, std::uint32_t flow_id,
                                    std::uint64_t size_bits, SimTime now) {
    if (!flow_granted(flow_id, now)) {
        return false;
    }
    auto router_grants = grants_.find(router);
    if (router_grants == grants_.end()) {
        return false;
    }
    auto grant = router_grants->second.find(flow_id);
    if (grant == router_grants->second.end()) {
        return false;
    }
    return grant->second.bucket->conforms(size_bits, now);
}

double RsvpAgent::reserved_bps(const std::string& router,
                               const std::string& next_hop) const {
    double total = 0.0;
    auto router_grants = grants_.find(router);
    if (router_grants == grants_.end()) {
        return 0.0;
    }
    for (const auto& [flow, grant] : router_grants->second) {
        if (grant.next_hop == next_hop) {
            total += grant.tspec.rate_bps;
        }
    }
    return total;
}

double RsvpAgent::reservable_limit_bps(const std::string& router,
                                       const std::string& next_hop) const {
    return static_cast<double>(net_.egress_rate_bps(router, next_hop)) *
           cfg_.reservable_fraction;
}

bool RsvpAgent::has_path_state(const std::string& router, std::uint32_t flow_id) const {
    auto it = path_state_.find(router);
    return it != path_state_.end() && it->second.count(flow_id) > 0;
}

bool RsvpAgent::has_reservation(const std::string& router, std::uint32_t flow_id) const {
    auto it = grants_.find(router);
    return it != grants_.end() && it->second.count(flow_id) > 0;
}

// ------------------------------------------------------- RsvpScheduler

RsvpScheduler::RsvpScheduler(std::unique_ptr<Scheduler> best_effort, RsvpAgent& agent,
                             std::string router, std::size_t capacity_pkts)
    : best_effort_(std::move(best_effort)), agent_(agent), router_(std::move(router)),
      capacity_(capacity_pkts) {
    if (!best_effort_) {
        throw std::invalid_argument("RsvpScheduler: best-effort scheduler required");
    }
    name_ = "rsvp_" + best_effort_->name();
}

EnqueueResult RsvpScheduler::enqueue(Packet packet, SimTime now) {
    if (agent_.classify_guaranteed(router_, packet.flow_id, packet.size_bits, now)) {
        if (guaranteed_.size() >= capacity_) {
            return EnqueueResult::drop(DropReason::TailDrop);
        }
        guaranteed_.push_back(std::move(packet));
        return EnqueueResult::accept();
    }
    return best_effort_->enqueue(std::move(packet), now);
}

std::optional<Packet> RsvpScheduler::dequeue(SimTime now) {
    if (!guaranteed_.empty()) {
        Packet p = std::move(guaranteed_.front());
        guaranteed_.pop_front();
        return p;
    }
    return best_effort_->dequeue(now);
}

std::vector<QueueDepth> RsvpScheduler::backlog() const {
    QueueDepth g;
    g.packets = guaranteed_.size();
    for (const auto& p : guaranteed_) {
        g.bytes += p.size_bits / 8;
    }
    std::vector<QueueDepth> out{g};
    for (const auto& d : best_effort_->backlog()) {
        out.push_back(d);
    }
    return out;
}

} // namespace qsim
