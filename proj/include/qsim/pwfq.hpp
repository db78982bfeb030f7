#ifndef QSIM_PWFQ_HPP
#define QSIM_PWFQ_HPP

#include <cstdint>
#include <deque>
#include <map>
#include <utility>
#include <vector>

#include "qsim/scheduler.hpp"

namespace qsim {

// Prioritized WFQ with round robin: top-level queues carry descending
// weights and are visited round-robin with weight-proportional time
// slices; inside each top-level queue, FIFO sub-queues split that slice
// in proportion to their priorities.
struct PwfqConfig {
    // w_1..w_n, strictly positive, sorted descending (index 0 is highest).
    std::vector<double> weights;
    // p_i1..p_im per top-level queue, strictly positive.
    std::vector<std::vector<double>> priorities;
    // Slice budget of one full rotation; each top-level queue gets
    // base_slice * w_i / sum(w) of it.
    double base_slice_s = 0.020;
    // Egress rate used to convert time slices into byte budgets.
    std::uint64_t link_rate_bps = 0;
    // (top queue, sub-queue) per traffic class; every class must map.
    std::map<TrafficClassKind, std::pair<std::size_t, std::size_t>> classes;
    std::size_t capacity_pkts = 64;

    void validate() const;
};

// Fraction of the link owned by top-level queue i: w_i / sum(w).
double top_level_share(const PwfqConfig& cfg, std::size_t i);

// Fraction owned by sub-queue (i, j): (p_ij / sum_k p_ik) * top share.
// Sub-queue shares of a top-level queue sum exactly to its top share.
double sub_queue_share(const PwfqConfig& cfg, std::size_t i, std::size_t j);

class PwfqRrScheduler : public Scheduler {
public:
    explicit PwfqRrScheduler(PwfqConfig cfg);

    EnqueueResult enqueue(Packet packet, SimTime now) override;
    std::optional<Packet> dequeue(SimTime now) override;
    std::vector<QueueDepth> backlog() const override;
    const std::string& name() const override { return name_; }

    // Completed outer rotations (the pass always restarts at queue 1).
    std::uint64_t rotations() const { return rotations_; }
    // Rotation during which the most recent packet departed.
    std::uint64_t last_serve_rotation() const { return last_serve_rotation_; }

    const PwfqConfig& config() const { return cfg_; }

private:
    void advance();

    PwfqConfig cfg_;
    // Sub-queues flattened in visit order: (0,0), (0,1), ..., (1,0), ...
    std::vector<std::deque<Packet>> queues_;
    std::vector<double> quanta_bits_;
    std::vector<double> deficit_bits_;
    std::vector<std::size_t> class_to_flat_;
    std::size_t cursor_ = 0;
    bool credited_ = false;
    std::uint64_t rotations_ = 0;
    std::uint64_t last_serve_rotation_ = 0;
    std::size_t backlog_pkts_ = 0;
    std::string name_ = "pwfq_rr";
};

} // namespace qsim

#endif // QSIM_PWFQ_HPP
