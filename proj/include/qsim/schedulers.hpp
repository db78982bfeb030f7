#ifndef QSIM_SCHEDULERS_HPP
#define QSIM_SCHEDULERS_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <vector>

#include "qsim/scheduler.hpp"

namespace qsim {

// Single FIFO queue with tail drop.
class FifoScheduler : public Scheduler {
public:
    explicit FifoScheduler(std::size_t capacity_pkts = 64);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

private:
    std::size_t capacity_;
    std::deque<Packet> queue_;
    std::string name_ = "fifo";
};

// One FIFO queue per traffic class. `queues` lists the classes of each
// internal queue; classes listed in the same entry share a queue.
struct ClassQueueMap {
    std::vector<std::vector<TrafficClassKind>> queues;

    // Validates that every traffic class maps to exactly one queue.
    void validate() const;
    std::size_t queue_of(TrafficClassKind kind) const;
};

// Strict priority across per-class FIFO queues. Queue 0 is served first;
// order the map from highest to lowest precedence.
class PqScheduler : public Scheduler {
public:
    PqScheduler(ClassQueueMap classes, std::size_t capacity_pkts = 64);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

private:
    ClassQueueMap classes_;
    std::size_t capacity_;
    std::vector<std::deque<Packet>> queues_;
    std::string name_ = "pq";
};

// Deficit round robin over class queues: each visit credits the queue's
// quantum, packets depart while the deficit covers the head packet, and
// the deficit resets to zero whenever the queue goes empty. Custom queuing
// and WFQ are both realized on this core; they differ only in how the
// per-queue quanta are derived.
class DrrScheduler : public Scheduler {
public:
    DrrScheduler(std::string name, ClassQueueMap classes,
                 std::vector<double> quanta_bytes, std::size_t capacity_pkts = 64);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

    // Completed full passes over the queue set; exposed so fairness bounds
    // can be checked per round from outside.
    std::uint64_t rotations() const { return rotations_; }
    // Rotation during which the most recent packet departed.
    std::uint64_t last_serve_rotation() const { return last_serve_rotation_; }
    std::size_t current_queue() const { return cursor_; }

private:
    void advance();

    std::string name_;
    ClassQueueMap classes_;
    std::size_t capacity_;
    std::vector<double> quanta_bits_;
    std::vector<double> deficit_bits_;
    std::vector<std::deque<Packet>> queues_;
    std::size_t cursor_ = 0;
    bool credited_ = false;
    std::uint64_t rotations_ = 0;
    std::uint64_t last_serve_rotation_ = 0;
    std::size_t backlog_pkts_ = 0;
};

// Custom queuing: round robin with a fixed byte quantum per class queue.
std::unique_ptr<Scheduler> make_cq(ClassQueueMap classes, std::vector<double> quanta_bytes,
                                   std::size_t capacity_pkts = 64);

// WFQ as weighted deficit round robin: quantum_i = base_quantum * weight_i,
// so a continuously backlogged queue's byte share converges to w_i / sum(w).
std::unique_ptr<Scheduler> make_wfq(ClassQueueMap classes, std::vector<double> weights,
                                    std::size_t capacity_pkts = 64,
                                    double base_quantum_bytes = 1500.0);

// Low latency queue grafted onto another discipline: packets of the LLQ
// classes go to an internal FIFO that is drained exhaustively before the
// inner scheduler is allowed to send anything.
class LlqScheduler : public Scheduler {
public:
    LlqScheduler(std::unique_ptr<Scheduler> inner,
                 std::vector<TrafficClassKind> llq_classes = {TrafficClassKind::Voice},
                 std::size_t capacity_pkts = 64);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

    std::size_t llq_backlog() const { return llq_.size(); }

private:
    bool is_llq_class(TrafficClassKind kind) const;

    std::unique_ptr<Scheduler> inner_;
    std::vector<TrafficClassKind> llq_classes_;
    std::size_t capacity_;
    std::deque<Packet> llq_;
    std::string name_;
};

} // namespace qsim

#endif // QSIM_SCHEDULERS_HPP
