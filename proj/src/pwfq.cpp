#include "qsim/pwfq.hpp"

#include <numeric>
#include <stdexcept>
#include <utility>

namespace qsim {

void PwfqConfig::validate() const {
    if (weights.empty()) {
        throw std::invalid_argument("PwfqConfig: at least one top-level queue required");
    }
    if (priorities.size() != weights.size()) {
        throw std::invalid_argument("PwfqConfig: one priority list per top-level queue");
    }
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) {
            throw std::invalid_argument("PwfqConfig: weights must be positive");
        }
        if (i > 0 && weights[i] > weights[i - 1]) {
            throw std::invalid_argument("PwfqConfig: weights must be sorted descending");
        }
        if (priorities[i].empty()) {
            throw std::invalid_argument("PwfqConfig: every top-level queue needs a sub-queue");
        }
        for (double p : priorities[i]) {
            if (p <= 0.0) {
                throw std::invalid_argument("PwfqConfig: priorities must be positive");
            }
        }
    }
    if (base_slice_s <= 0.0) {
        throw std::invalid_argument("PwfqConfig: base slice must be positive");
    }
    if (link_rate_bps == 0) {
        throw std::invalid_argument("PwfqConfig: link rate must be positive");
    }
    if (capacity_pkts == 0) {
        throw std::invalid_argument("PwfqConfig: capacity must be positive");
    }
    const TrafficClassKind kinds[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    for (TrafficClassKind kind : kinds) {
        auto it = classes.find(kind);
        if (it == classes.end()) {
            throw std::invalid_argument("PwfqConfig: every traffic class must map to a sub-queue");
        }
        auto [i, j] = it->second;
        if (i >= weights.size() || j >= priorities[i].size()) {
            throw std::invalid_argument("PwfqConfig: class maps to a nonexistent sub-queue");
        }
    }
}

double top_level_share(const PwfqConfig& cfg, std::size_t i) {
    if (i >= cfg.weights.size()) {
        throw std::out_of_range("top_level_share: bad queue index");
    }
    const double total = std::accumulate(cfg.weights.begin(), cfg.weights.end(), 0.0);
    return cfg.weights[i] / total;
}

double sub_queue_share(const PwfqConfig& cfg, std::size_t i, std::size_t j) {
    const double top = top_level_share(cfg, i);
    if (j >= cfg.priorities[i].size()) {
        throw std::out_of_range("sub_queue_share: bad sub-queue index");
    }
    const double total =
        std::accumulate(cfg.priorities[i].begin(), cfg.priorities[i].end(), 0.0);
    return cfg.priorities[i][j] / total * top;
}

PwfqRrScheduler::PwfqRrScheduler(PwfqConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    // One rotation carries base_slice * link_rate bits; each sub-queue's
    // quantum is its share of that budget, so long-run byte shares follow
    // the nested formulas.
    const double rotation_bits =
        cfg_.base_slice_s * static_cast<double>(cfg_.link_rate_bps);
    std::vector<std::pair<std::size_t, std::size_t>> flat_index;
    for (std::size_t i = 0; i < cfg_.weights.size(); ++i) {
        for (std::size_t j = 0; j < cfg_.priorities[i].size(); ++j) {
            quanta_bits_.push_back(rotation_bits * sub_queue_share(cfg_, i, j));
            flat_index.emplace_back(i, j);
        }
    }
    queues_.resize(quanta_bits_.size());
    deficit_bits_.assign(quanta_bits_.size(), 0.0);

    class_to_flat_.assign(3, 0);
    for (const auto& [kind, ij] : cfg_.classes) {
        for (std::size_t f = 0; f < flat_index.size(); ++f) {
            if (flat_index[f] == ij) {
                class_to_flat_[static_cast<std::size_t>(kind)] = f;
                break;
            }
        }
    }
}

EnqueueResult PwfqRrScheduler::enqueue(Packet packet, SimTime) {
    auto& q = queues_[class_to_flat_[static_cast<std::size_t>(packet.cls.kind)]];
    if (q.size() >= cfg_.capacity_pkts) {
        return EnqueueResult::drop(DropReason::TailDrop);
    }
    q.push_back(std::move(packet));
    ++backlog_pkts_;
    return EnqueueResult::accept();
}

void PwfqRrScheduler::advance() {
    cursor_ = (cursor_ + 1) % queues_.size();
    credited_ = false;
    if (cursor_ == 0) {
        ++rotations_;
    }
}

std::optional<Packet> PwfqRrScheduler::dequeue(SimTime) {
    if (backlog_pkts_ == 0) {
        return std::nullopt;
    }
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

std::vector<QueueDepth> PwfqRrScheduler::backlog() const {
    std::vector<QueueDepth> out;
    out.reserve(queues_.size());
    for (const auto& q : queues_) {
        QueueDepth d;
        d.packets = q.size();
        for (const auto& p : q) {
            d.bytes += p.size_bits / 8;
        }
        out.push_back(d);
    }
    return out;
}

} // namespace qsim
