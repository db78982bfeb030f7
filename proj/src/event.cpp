#include "qsim/event.hpp"

#include <stdexcept>
#include <utility>

namespace qsim {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
    case EventKind::PacketArrival:
        return "packet_arrival";
    case EventKind::TransmissionComplete:
        return "transmission_complete";
    case EventKind::SourceEmit:
        return "source_emit";
    case EventKind::SignalingTimer:
        return "signaling_timer";
    case EventKind::SimEnd:
        return "sim_end";
    }
    return "sim_end";
}

std::uint64_t Simulator::schedule(SimTime fire_at, EventKind kind,
                                  std::function<void()> action) {
    if (fire_at < clock_) {
        throw std::logic_error("Simulator: scheduling into the past");
    }
    const std::uint64_t seq = next_seq_++;
    queue_.emplace(Key{fire_at.sec(), seq}, Pending{kind, std::move(action)});
    return seq;
}

RunSummary Simulator::run_until(SimTime end) {
    if (end < clock_) {
        throw std::logic_error("Simulator: run_until into the past");
    }
    RunSummary summary;
    while (!queue_.empty()) {
        auto first = queue_.begin();
        if (first->first.at > end.sec()) {
            break;
        }
        clock_ = SimTime::seconds(first->first.at);
        if (trace_enabled_) {
            trace_.push_back(TraceEntry{first->first.at, first->first.seq, first->second.kind});
        }
        auto action = std::move(first->second.action);
        queue_.erase(first);
        ++summary.events_processed;
        if (action) {
            action();
        }
    }
    clock_ = end;
    summary.final_clock = clock_;
    return summary;
}

} // namespace qsim
