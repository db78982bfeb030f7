#include "qsim/sim_run.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <utility>

#include "qsim/network.hpp"
#include "qsim/rng.hpp"
#include "qsim/rsvp.hpp"

namespace qsim {

namespace {

class Simulation {
public:
    Simulation(const ScenarioConfig& cfg, bool trace) : cfg_(cfg), net_(cfg) {
        cfg_.validate();
        sim_.enable_trace(trace);

        if (cfg_.rsvp.enabled) {
            RsvpAgent::Config rc;
            rc.reservable_fraction = cfg_.rsvp.reservable_fraction;
            rc.refresh_period_s = cfg_.rsvp.refresh_period_s;
            rc.timeout_periods = cfg_.rsvp.timeout_periods;
            agent_ = std::make_unique<RsvpAgent>(net_, rc);
            net_.wrap_router_egresses(*agent_, cfg_.scheduler.capacity_pkts);
        }

        RandomStream master(cfg_.run.seed);
        for (std::size_t i = 0; i < cfg_.sources.size(); ++i) {
            SourceSpec spec = cfg_.sources[i];
            if (cfg_.run.phase_jitter_s > 0.0) {
                spec.start_s += master.substream(spec.name + "/phase")
                                    .uniform(0.0, cfg_.run.phase_jitter_s);
            }
            const auto flow_id = static_cast<std::uint32_t>(i + 1);
            sources_.emplace_back(spec, master.substream(spec.name),
                                  static_cast<std::uint64_t>(flow_id) << 40, flow_id);
            dest_of_flow_.push_back(spec.to);
            flows_.push_back(FlowInfo{flow_id, spec.name, spec.from, spec.to, spec.cls});
            if (!net_.next_hop(spec.from, spec.to) && spec.from != spec.to) {
                log_.push_back("source " + spec.name +
                               " has no route to its destination; packets will drop");
            }
        }
    }

    RunOutput run() {
        const SimTime end = SimTime::seconds(cfg_.run.duration_s);
        for (std::size_t i = 0; i < sources_.size(); ++i) {
            const SimTime first = sources_[i].first_emission_time();
            if (first.sec() < sources_[i].spec().stop_s && first <= end) {
                sim_.schedule(first, EventKind::SourceEmit, [this, i] { emit(i); });
            }
        }
        if (cfg_.rsvp.enabled && !cfg_.rsvp.reservations.empty()) {
            sim_.schedule(SimTime::seconds(0.05), EventKind::SignalingTimer,
                          [this] { signal(); });
        }
        sim_.schedule(end, EventKind::SimEnd, [] {});

        RunOutput out;
        out.engine = sim_.run_until(end);
        out.records = std::move(records_);
        out.flows = std::move(flows_);
        out.log = std::move(log_);
        out.trace = sim_.trace();
        return out;
    }

private:
    void emit(std::size_t i) {
        const SimTime now = sim_.now();
        auto emission = sources_[i].next_emission(now);

        PacketRecord rec;
        rec.id = emission.packet.id;
        rec.flow_id = emission.packet.flow_id;
        rec.cls = emission.packet.cls.kind;
        rec.size_bits = emission.packet.size_bits;
        rec.created_s = now.sec();
        record_index_[rec.id] = records_.size();
        records_.push_back(rec);

        forward(emission.packet, sources_[i].spec().from);

        if (emission.next_time) {
            sim_.schedule(*emission.next_time, EventKind::SourceEmit,
                          [this, i] { emit(i); });
        }
    }

    void forward(Packet packet, const std::string& node) {
        const SimTime now = sim_.now();
        const std::string& dest = dest_of_flow_[packet.flow_id - 1];
        if (node == dest) {
            packet.mark_delivered(now);
            auto& rec = records_[record_index_.at(packet.id)];
            rec.fate = PacketFate::Delivered;
            rec.fate_s = packet.delivered_at->sec();
            return;
        }
        auto hop = net_.next_hop(node, dest);
        if (!hop) {
            drop(packet, node, DropReason::NoRoute);
            return;
        }
        const std::size_t ei = net_.egress_index(node, *hop);
        auto result = net_.egress(ei).sched->enqueue(packet, now);
        if (!result.accepted()) {
            drop(packet, net_.egress(ei).id, *result.dropped);
            return;
        }
        try_transmit(ei);
    }

    void drop(const Packet& packet, const std::string& site, DropReason reason) {
        auto& rec = records_[record_index_.at(packet.id)];
        rec.fate = PacketFate::Dropped;
        rec.fate_s = sim_.now().sec();
        rec.drop_site = site;
        rec.drop_reason = drop_reason_name(reason);
    }

    void try_transmit(std::size_t ei) {
        auto& e = net_.egress(ei);
        if (e.transmitting) {
            return;
        }
        const SimTime now = sim_.now();
        auto packet = e.sched->dequeue(now);
        if (!packet) {
            return;
        }
        e.transmitting = true;
        const SimTime done = now + transmission_time(packet->size_bits, e.rate_bps);
        sim_.schedule(done, EventKind::TransmissionComplete,
                      [this, ei, p = *packet] { complete(ei, p); });
    }

    void complete(std::size_t ei, const Packet& packet) {
        auto& e = net_.egress(ei);
        e.transmitting = false;
        const SimTime now = sim_.now();
        const SimTime arrive = now + SimTime::seconds(e.propagation_delay_s);
        sim_.schedule(arrive, EventKind::PacketArrival,
                      [this, ei, packet] { forward(packet, net_.egress(ei).to); });
        try_transmit(ei);
    }

    void signal() {
        const SimTime now = sim_.now();
        agent_->expire(now);
        for (const auto& r : cfg_.rsvp.reservations) {
            const Source* src = nullptr;
            for (const auto& s : sources_) {
                if (s.spec().name == r.source_name) {
                    src = &s;
                    break;
                }
            }
            if (!src) {
                throw std::logic_error("reservation names unknown source " + r.source_name);
            }
            TrafficSpec tspec;
            tspec.rate_bps = r.rate_bps;
            tspec.burst_bytes = r.burst_bytes != 0
                                    ? r.burst_bytes
                                    : static_cast<std::uint64_t>(cfg_.rsvp.bucket_depth_pkts) *
                                          src->spec().packet_bytes;
            PathMsg path;
            path.flow_id = src->flow_id();
            path.tspec = tspec;
            path.sender = src->spec().from;
            path.receiver = src->spec().to;
            auto pr = agent_->propagate_path(path, now);
            if (!pr.delivered) {
                log_.push_back("path " + r.source_name + " dropped: " + pr.error);
                continue;
            }
            ResvMsg resv;
            resv.flow_id = src->flow_id();
            resv.tspec = tspec;
            resv.reverse_hops.assign(pr.router_hops.rbegin(), pr.router_hops.rend());
            auto rr = agent_->send_resv(resv, now);
            log_.push_back("resv " + r.source_name + ": " +
                           admission_outcome_name(rr.outcome) +
                           (rr.rejecting_router.empty() ? "" : " at " + rr.rejecting_router));
        }
        const SimTime next = now + SimTime::seconds(cfg_.rsvp.refresh_period_s);
        if (next.sec() < cfg_.run.duration_s) {
            sim_.schedule(next, EventKind::SignalingTimer, [this] { signal(); });
        }
    }

    ScenarioConfig cfg_;
    Simulator sim_;
    Network net_;
    std::unique_ptr<RsvpAgent> agent_;
    std::vector<Source> sources_;
    std::vector<std::string> dest_of_flow_;
    std::vector<FlowInfo> flows_;
    std::vector<PacketRecord> records_;
    std::map<std::uint64_t, std::size_t> record_index_;
    std::vector<std::string> log_;
};

} // namespace

RunOutput run_scenario(const ScenarioConfig& cfg, bool trace) {
    Simulation sim(cfg, trace);
    return sim.run();
}

} // namespace qsim
