#ifndef QSIM_SCHEDULER_HPP
#define QSIM_SCHEDULER_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qsim/packet.hpp"
#include "qsim/time.hpp"

namespace qsim {

enum class DropReason { TailDrop, NoRoute };

const char* drop_reason_name(DropReason reason);

// Enqueue outcome: accepted, or dropped with a reason. A dropped packet
// never enters the scheduler and can never be dequeued later.
struct EnqueueResult {
    std::optional<DropReason> dropped;

    bool accepted() const { return !dropped.has_value(); }

    static EnqueueResult accept() { return EnqueueResult{}; }
    static EnqueueResult drop(DropReason r) { return EnqueueResult{r}; }
};

struct QueueDepth {
    std::size_t packets = 0;
    std::uint64_t bytes = 0;
};

// Uniform enqueue/dequeue contract realized by all seven disciplines.
// Work conserving: when any internal queue is non-empty, dequeue returns
// a packet.
class Scheduler {
public:
    virtual ~Scheduler() = default;

    virtual EnqueueResult enqueue(Packet packet, SimTime now) = 0;
    virtual std::optional<Packet> dequeue(SimTime now) = 0;

    // Depth of every internal queue, in a stable order.
    virtual std::vector<QueueDepth> backlog() const = 0;

    virtual const std::string& name() const = 0;

    std::size_t backlog_packets() const {
        std::size_t total = 0;
        for (const auto& q : backlog()) {
            total += q.packets;
        }
        return total;
    }
};

} // namespace qsim

#endif // QSIM_SCHEDULER_HPP
