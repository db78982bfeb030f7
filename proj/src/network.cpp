#include "qsim/network.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <stdexcept>

#include "qsim/pwfq.hpp"
#include "qsim/schedulers.hpp"

namespace qsim {

namespace {

TrafficClassKind class_from_name_or_throw(const std::string& name) {
    auto kind = traffic_class_from_name(name);
    if (!kind) {
        throw std::invalid_argument("scheduler config: unknown class name " + name);
    }
    return *kind;
}

ClassQueueMap class_map_from_config(const std::vector<std::vector<std::string>>& queues) {
    ClassQueueMap map;
    for (const auto& queue : queues) {
        std::vector<TrafficClassKind> kinds;
        for (const auto& name : queue) {
            kinds.push_back(class_from_name_or_throw(name));
        }
        map.queues.push_back(std::move(kinds));
    }
    return map;
}

} // namespace

std::unique_ptr<Scheduler> make_scheduler(const SchedulerConfig& cfg,
                                          std::uint64_t link_rate_bps) {
    const auto classes = class_map_from_config(cfg.queues);
    std::vector<TrafficClassKind> llq;
    for (const auto& name : cfg.llq_classes) {
        llq.push_back(class_from_name_or_throw(name));
    }

    if (cfg.kind == "fifo") {
        return std::make_unique<FifoScheduler>(cfg.capacity_pkts);
    }
    if (cfg.kind == "pq") {
        return std::make_unique<PqScheduler>(classes, cfg.capacity_pkts);
    }
    if (cfg.kind == "cq") {
        return make_cq(classes, cfg.quanta_bytes, cfg.capacity_pkts);
    }
    if (cfg.kind == "cq_llq") {
        return std::make_unique<LlqScheduler>(
            make_cq(classes, cfg.quanta_bytes, cfg.capacity_pkts), llq, cfg.capacity_pkts);
    }
    if (cfg.kind == "wfq") {
        return make_wfq(classes, cfg.weights, cfg.capacity_pkts, cfg.base_quantum_bytes);
    }
    if (cfg.kind == "wfq_llq") {
        return std::make_unique<LlqScheduler>(
            make_wfq(classes, cfg.weights, cfg.capacity_pkts, cfg.base_quantum_bytes), llq,
            cfg.capacity_pkts);
    }
    if (cfg.kind == "pwfq_rr") {
        PwfqConfig pwfq;
        pwfq.weights = cfg.pwfq_weights;
        pwfq.priorities = cfg.pwfq_priorities;
        pwfq.base_slice_s = cfg.pwfq_base_slice_s;
        pwfq.link_rate_bps = link_rate_bps;
        pwfq.capacity_pkts = cfg.capacity_pkts;
        for (const auto& [name, ij] : cfg.pwfq_classes) {
            pwfq.classes[class_from_name_or_throw(name)] = ij;
        }
        return std::make_unique<PwfqRrScheduler>(std::move(pwfq));
    }
    throw std::invalid_argument("unknown scheduler kind " + cfg.kind);
}

Network::Network(const ScenarioConfig& cfg) : scheduler_cfg_(cfg.scheduler) {
    cfg.validate();
    for (const auto& node : cfg.nodes) {
        nodes_[node.id] = node.kind;
    }
    for (const auto& link : cfg.links) {
        adjacency_[link.a].push_back(link.b);
        adjacency_[link.b].push_back(link.a);
        for (int dir = 0; dir < 2; ++dir) {
            Egress e;
            e.from = dir == 0 ? link.a : link.b;
            e.to = dir == 0 ? link.b : link.a;
            e.id = e.from + "->" + e.to;
            e.rate_bps = link.rate_bps;
            e.propagation_delay_s = link.propagation_delay_s;
            // Only router egresses run the discipline under study.
            e.sched = nodes_.at(e.from) == NodeKind::Router
                          ? build_scheduler(scheduler_cfg_, e.rate_bps)
                          : std::make_unique<FifoScheduler>(1024);
            egress_by_pair_[e.from][e.to] = egresses_.size();
            egresses_.push_back(std::move(e));
        }
    }
    for (auto& [node, neighbors] : adjacency_) {
        std::sort(neighbors.begin(), neighbors.end());
    }
    build_routes();
    validate_routes();
}

std::unique_ptr<Scheduler> Network::build_scheduler(const SchedulerConfig& cfg,
                                                    std::uint64_t link_rate_bps) const {
    return make_scheduler(cfg, link_rate_bps);
}

void Network::wrap_router_egresses(RsvpAgent& agent,
                                   std::size_t guaranteed_capacity_pkts) {
    for (auto& e : egresses_) {
        if (nodes_.at(e.from) == NodeKind::Router) {
            e.sched = std::make_unique<RsvpScheduler>(std::move(e.sched), agent, e.from,
                                                      guaranteed_capacity_pkts);
        }
    }
}

bool Network::has_node(const std::string& id) const { return nodes_.count(id) > 0; }

NodeKind Network::node_kind(const std::string& id) const { return nodes_.at(id); }

void Network::build_routes() {
    // Hop-count shortest paths by BFS from every destination; sorted
    // adjacency makes tie-breaks deterministic.
    for (const auto& [dest, kind] : nodes_) {
        std::map<std::string, std::string> toward; // node -> next hop to dest
        std::deque<std::string> frontier{dest};
        std::set<std::string> seen{dest};
        while (!frontier.empty()) {
            const std::string cur = frontier.front();
            frontier.pop_front();
            auto adj = adjacency_.find(cur);
            if (adj == adjacency_.end()) {
                continue;
            }
            for (const auto& nb : adj->second) {
                if (seen.insert(nb).second) {
                    toward[nb] = cur;
                    frontier.push_back(nb);
                }
            }
        }
        for (auto& [node, hop] : toward) {
            next_hop_[node][dest] = hop;
        }
    }
}

void Network::validate_routes() const {
    // Walk every (src, dest) pair; a loop or dangling hop is a build error.
    for (const auto& [src, kind_a] : nodes_) {
        for (const auto& [dest, kind_b] : nodes_) {
            if (src == dest) {
                continue;
            }
            auto hops = next_hop_.find(src);
            if (hops == next_hop_.end() || !hops->second.count(dest)) {
                continue; // unreachable is allowed; sources check reachability
            }
            std::string cur = src;
            std::size_t steps = 0;
            while (cur != dest) {
                if (++steps > nodes_.size()) {
                    throw std::logic_error("Network: forwarding loop toward " + dest);
                }
                cur = next_hop_.at(cur).at(dest);
            }
        }
    }
}

std::optional<std::string> Network::next_hop(const std::string& node,
                                             const std::string& dest) const {
    auto hops = next_hop_.find(node);
    if (hops == next_hop_.end()) {
        return std::nullopt;
    }
    auto it = hops->second.find(dest);
    if (it == hops->second.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::size_t Network::egress_index(const std::string& from, const std::string& to) const {
    return egress_by_pair_.at(from).at(to);
}

double Network::path_lower_bound_s(const std::string& from, const std::string& to,
                                   std::uint64_t size_bits) const {
    double total = 0.0;
    for (std::string cur = from; cur != to;) {
        auto hop = next_hop(cur, to);
        if (!hop) {
            throw std::invalid_argument("path_lower_bound_s: unroutable pair");
        }
        const Egress& e = egresses_[egress_index(cur, *hop)];
        total += static_cast<double>(size_bits) / static_cast<double>(e.rate_bps) +
                 e.propagation_delay_s;
        cur = *hop;
    }
    return total;
}

std::vector<std::string> Network::path_nodes(const std::string& from,
                                             const std::string& to) const {
    std::vector<std::string> out;
    if (!has_node(from) || !has_node(to)) {
        return out;
    }
    out.push_back(from);
    for (std::string cur = from; cur != to;) {
        auto hop = next_hop(cur, to);
        if (!hop) {
            return {};
        }
        cur = *hop;
        out.push_back(cur);
    }
    return out;
}

bool Network::is_router(const std::string& node) const {
    auto it = nodes_.find(node);
    return it != nodes_.end() && it->second == NodeKind::Router;
}

std::uint64_t Network::egress_rate_bps(const std::string& node,
                                       const std::string& next_hop) const {
    return egresses_[egress_index(node, next_hop)].rate_bps;
}

} // namespace qsim
