#ifndef QSIM_EVENT_HPP
#define QSIM_EVENT_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "qsim/time.hpp"

namespace qsim {

enum class EventKind {
    PacketArrival,
    TransmissionComplete,
    SourceEmit,
    SignalingTimer,
    SimEnd,
};

const char* event_kind_name(EventKind kind);

struct TraceEntry {
    double fire_at_s = 0.0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::SimEnd;

    friend bool operator==(const TraceEntry&, const TraceEntry&) = default;
};

struct RunSummary {
    std::uint64_t events_processed = 0;
    SimTime final_clock;
};

// Single-threaded discrete-event core. Events pop in strictly ascending
// (fire_at, seq) order; seq is assigned at scheduling time so ties resolve
// by scheduling order regardless of container internals.
class Simulator {
public:
    SimTime now() const { return clock_; }

    std::uint64_t schedule(SimTime fire_at, EventKind kind, std::function<void()> action);

    // Processes every event with fire_at <= end, in order, including events
    // scheduled while running. The clock is left at `end`.
    RunSummary run_until(SimTime end);

    void enable_trace(bool on) { trace_enabled_ = on; }
    const std::vector<TraceEntry>& trace() const { return trace_; }

    std::size_t pending() const { return queue_.size(); }

private:
    struct Key {
        double at;
        std::uint64_t seq;
        friend auto operator<=>(const Key&, const Key&) = default;
    };

    struct Pending {
        EventKind kind;
        std::function<void()> action;
    };

    SimTime clock_;
    std::uint64_t next_seq_ = 0;
    std::map<Key, Pending> queue_;
    bool trace_enabled_ = false;
    std::vector<TraceEntry> trace_;
};

} // namespace qsim

#endif // QSIM_EVENT_HPP
