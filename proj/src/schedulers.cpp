#include "qsim/schedulers.hpp"

#include <algorithm>
#include <stdexcept>
#include <utility>

namespace qsim {

const char* drop_reason_name(DropReason reason) {
    switch (reason) {
    case DropReason::TailDrop:
        return "tail_drop";
    case DropReason::NoRoute:
        return "no_route";
    }
    return "tail_drop";
}

namespace {

QueueDepth depth_of(const std::deque<Packet>& q) {
    QueueDepth d;
    d.packets = q.size();
    for (const auto& p : q) {
        d.bytes += p.size_bits / 8;
    }
    return d;
}

} // namespace

// ---------------------------------------------------------------- FIFO

FifoScheduler::FifoScheduler(std::size_t capacity_pkts) : capacity_(capacity_pkts) {
    if (capacity_ == 0) {
        throw std::invalid_argument("FifoScheduler: capacity must be positive");
    }
}

EnqueueResult FifoScheduler::enqueue(Packet packet, SimTime) {
    if (queue_.size() >= capacity_) {
        return EnqueueResult::drop(DropReason::TailDrop);
    }
    queue_.push_back(std::move(packet));
    return EnqueueResult::accept();
}

std::optional<Packet> FifoScheduler::dequeue(SimTime) {
    if (queue_.empty()) {
        return std::nullopt;
    }
    Packet p = std::move(queue_.front());
    queue_.pop_front();
    return p;
}

std::vector<QueueDepth> FifoScheduler::backlog() const {
    return {depth_of(queue_)};
}

// ------------------------------------------------------ class mapping

void ClassQueueMap::validate() const {
    if (queues.empty()) {
        throw std::invalid_argument("ClassQueueMap: no queues");
    }
    int seen[3] = {0, 0, 0};
    for (const auto& entry : queues) {
        for (TrafficClassKind kind : entry) {
            seen[static_cast<int>(kind)]++;
        }
    }
    for (int count : seen) {
        if (count != 1) {
            throw std::invalid_argument(
                "ClassQueueMap: every traffic class must map to exactly one queue");
        }
    }
}

std::size_t ClassQueueMap::queue_of(TrafficClassKind kind) const {
    for (std::size_t i = 0; i < queues.size(); ++i) {
        for (TrafficClassKind k : queues[i]) {
            if (k == kind) {
                return i;
            }
        }
    }
    throw std::logic_error("ClassQueueMap: unmapped traffic class");
}

// ------------------------------------------------------------------ PQ

PqScheduler::PqScheduler(ClassQueueMap classes, std::size_t capacity_pkts)
    : classes_(std::move(classes)), capacity_(capacity_pkts) {
    classes_.validate();
    if (capacity_ == 0) {
        throw std::invalid_argument("PqScheduler: capacity must be positive");
    }
    queues_.resize(classes_.queues.size());
}

EnqueueResult PqScheduler::enqueue(Packet packet, SimTime) {
    auto& q = queues_[classes_.queue_of(packet.cls.kind)];
    if (q.size() >= capacity_) {
        return EnqueueResult::drop(DropReason::TailDrop);
    }
    q.push_back(std::move(packet));
    return EnqueueResult::accept();
}

std::optional<Packet> PqScheduler::dequeue(SimTime) {
    for (auto& q : queues_) {
        if (!q.empty()) {
            Packet p = std::move(q.front());
            q.pop_front();
            return p;
        }
    }
    return std::nullopt;
}

std::vector<QueueDepth> PqScheduler::backlog() const {
    std::vector<QueueDepth> out;
    out.reserve(queues_.size());
    for (const auto& q : queues_) {
        out.push_back(depth_of(q));
    }
    return out;
}

// ----------------------------------------------------------------- DRR

DrrScheduler::DrrScheduler(std::string name, ClassQueueMap classes,
                           std::vector<double> quanta_bytes, std::size_t capacity_pkts)
    : name_(std::move(name)), classes_(std::move(classes)), capacity_(capacity_pkts) {
    classes_.validate();
    if (capacity_ == 0) {
        throw std::invalid_argument("DrrScheduler: capacity must be positive");
    }
    if (quanta_bytes.size() != classes_.queues.size()) {
        throw std::invalid_argument("DrrScheduler: one quantum per queue required");
    }
    for (double q : quanta_bytes) {
        if (q <= 0.0) {
            throw std::invalid_argument("DrrScheduler: quanta must be positive");
        }
        quanta_bits_.push_back(q * 8.0);
    }
    deficit_bits_.assign(quanta_bits_.size(), 0.0);
    queues_.resize(quanta_bits_.size());
}

EnqueueResult DrrScheduler::enqueue(Packet packet, SimTime) {
    auto& q = queues_[classes_.queue_of(packet.cls.kind)];
    if (q.size() >= capacity_) {
        return EnqueueResult::drop(DropReason::TailDrop);
    }
    q.push_back(std::move(packet));
    ++backlog_pkts_;
    return EnqueueResult::accept();
}

void DrrScheduler::advance() {
    cursor_ = (cursor_ + 1) % queues_.size();
    credited_ = false;
    if (cursor_ == 0) {
        ++rotations_;
    }
}

std::optional<Packet> DrrScheduler::dequeue(SimTime) {
    if (backlog_pkts_ == 0) {
        return std::nullopt;
    }
    // Terminates: some queue is non-empty and its deficit grows by a full
    // quantum on every visit.
    while (true) {
        auto& q = queues_[cursor_];
        if (q.empty()) {
            deficit_bits_[cursor_] = 0.0;
            advance();
            continue;
        }
        if (!credited_) {
            deficit_bits_[cursor_] += quanta_bits_[cursor_];
            credited_ = true;
        }
        const double head_bits = static_cast<double>(q.front().size_bits);
        if (deficit_bits_[cursor_] >= head_bits) {
            Packet p = std::move(q.front());
            q.pop_front();
            --backlog_pkts_;
            deficit_bits_[cursor_] -= head_bits;
            last_serve_rotation_ = rotations_;
            if (q.empty()) {
                deficit_bits_[cursor_] = 0.0;
                advance();
            }
            return p;
        }
        advance();
    }
}

std::vector<QueueDepth> DrrScheduler::backlog() const {
    std::vector<QueueDepth> out;
    out.reserve(queues_.size());
    for (const auto& q : queues_) {
        out.push_back(depth_of(q));
    }
    return out;
}

std::unique_ptr<Scheduler> make_cq(ClassQueueMap classes, std::vector<double> quanta_bytes,
                                   std::size_t capacity_pkts) {
    return std::make_unique<DrrScheduler>("cq", std::move(classes), std::move(quanta_bytes),
                                          capacity_pkts);
}

std::unique_ptr<Scheduler> make_wfq(ClassQueueMap classes, std::vector<double> weights,
                                    std::size_t capacity_pkts, double base_quantum_bytes) {
    if (base_quantum_bytes <= 0.0) {
        throw std::invalid_argument("make_wfq: base quantum must be positive");
    }
    std::vector<double> quanta;
    quanta.reserve(weights.size());
    for (double w : weights) {
        if (w <= 0.0) {
            throw std::invalid_argument("make_wfq: weights must be positive");
        }
        quanta.push_back(base_quantum_bytes * w);
    }
    return std::make_unique<DrrScheduler>("wfq", std::move(classes), std::move(quanta),
                                          capacity_pkts);
}

// ----------------------------------------------------------------- LLQ

LlqScheduler::LlqScheduler(std::unique_ptr<Scheduler> inner,
                           std::vector<TrafficClassKind> llq_classes,
                           std::size_t capacity_pkts)
    : inner_(std::move(inner)), llq_classes_(std::move(llq_classes)),
      capacity_(capacity_pkts) {
    if (!inner_) {
        throw std::invalid_argument("LlqScheduler: inner scheduler required");
    }
    if (capacity_ == 0) {
        throw std::invalid_argument("LlqScheduler: capacity must be positive");
    }
    name_ = inner_->name() + "_llq";
}

bool LlqScheduler::is_llq_class(TrafficClassKind kind) const {
    return std::find(llq_classes_.begin(), llq_classes_.end(), kind) != llq_classes_.end();
}

EnqueueResult LlqScheduler::enqueue(Packet packet, SimTime now) {
    if (is_llq_class(packet.cls.kind)) {
        if (llq_.size() >= capacity_) {
            return EnqueueResult::drop(DropReason::TailDrop);
        }
        llq_.push_back(std::move(packet));
        return EnqueueResult::accept();
    }
    return inner_->enqueue(std::move(packet), now);
}

std::optional<Packet> LlqScheduler::dequeue(SimTime now) {
    if (!llq_.empty()) {
        Packet p = std::move(llq_.front());
        llq_.pop_front();
        return p;
    }
    return inner_->dequeue(now);
}

std::vector<QueueDepth> LlqScheduler::backlog() const {
    std::vector<QueueDepth> out{depth_of(llq_)};
    for (const auto& d : inner_->backlog()) {
        out.push_back(d);
    }
    return out;
}

} // namespace qsim
