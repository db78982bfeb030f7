#include "doctest.h"

#include <cmath>
#include <map>
#include <set>
#include <vector>

#include "qsim/pwfq.hpp"
#include "qsim/rng.hpp"
#include "qsim/schedulers.hpp"

using namespace qsim;

namespace {

std::uint64_t g_next_id = 1;

Packet pkt(TrafficClassKind cls, std::uint32_t bytes) {
    return Packet::make(g_next_id++, 1, std::uint64_t{bytes} * 8, Ipv6Marking{},
                        TrafficClass{cls}, SimTime());
}

PwfqConfig three_queue_config() {
    PwfqConfig cfg;
    cfg.weights = {3.0, 2.0, 1.0};
    cfg.priorities = {{1.0}, {1.0}, {1.0}};
    cfg.link_rate_bps = 1'000'000;
    cfg.base_slice_s = 0.1;
    cfg.classes = {{TrafficClassKind::Voice, {0, 0}},
                   {TrafficClassKind::Video, {1, 0}},
                   {TrafficClassKind::Data, {2, 0}}};
    return cfg;
}

// Flat visit-order index of each class's sub-queue under the given config.
std::map<TrafficClassKind, std::size_t> flat_index_of(const PwfqConfig& cfg) {
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> flat;
    std::size_t n = 0;
    for (std::size_t i = 0; i < cfg.weights.size(); ++i) {
        for (std::size_t j = 0; j < cfg.priorities[i].size(); ++j) {
            flat[{i, j}] = n++;
        }
    }
    std::map<TrafficClassKind, std::size_t> out;
    for (const auto& [cls, ij] : cfg.classes) {
        out[cls] = flat.at(ij);
    }
    return out;
}

// Keeps every class's sub-queue backlogged and returns observed byte
// shares after `departures` dequeues of equal-size packets.
std::map<TrafficClassKind, double> measured_shares(PwfqRrScheduler& sched,
                                                   const PwfqConfig& cfg, int departures,
                                                   std::uint32_t packet_bytes) {
    const auto flat = flat_index_of(cfg);
    std::map<TrafficClassKind, std::uint64_t> bytes;
    std::uint64_t total_bytes = 0;
    for (int i = 0; i < departures; ++i) {
        const auto depths = sched.backlog();
        for (const auto& [cls, queue] : flat) {
            for (std::size_t n = depths[queue].packets; n < 8; ++n) {
                sched.enqueue(pkt(cls, packet_bytes), SimTime());
            }
        }
        auto p = sched.dequeue(SimTime());
        REQUIRE(p.has_value());
        bytes[p->cls.kind] += p->size_bits / 8;
        total_bytes += p->size_bits / 8;
    }
    std::map<TrafficClassKind, double> shares;
    for (const auto& [cls, b] : bytes) {
        shares[cls] = static_cast<double>(b) / static_cast<double>(total_bytes);
    }
    return shares;
}

} // namespace

TEST_SUITE("pwfq-rr") {

TEST_CASE("top level shares follow the weight formula") {
    PwfqConfig equal = three_queue_config();
    equal.weights = {1.0, 1.0, 1.0};
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(top_level_share(equal, i) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }

    const PwfqConfig cfg = three_queue_config();
    CHECK(top_level_share(cfg, 0) == doctest::Approx(0.5).epsilon(1e-12));
    double sum = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
        sum += top_level_share(cfg, i);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
}

TEST_CASE("sub-queue shares scale the priorities inside the top share") {
    PwfqConfig cfg = three_queue_config();
    cfg.weights = {3.0, 2.0, 1.0};
    cfg.priorities = {{4.0, 3.0, 2.0, 1.0}, {1.0}, {1.0}};
    cfg.classes = {{TrafficClassKind::Voice, {0, 0}},
                   {TrafficClassKind::Video, {0, 1}},
                   {TrafficClassKind::Data, {1, 0}}};
    CHECK(sub_queue_share(cfg, 0, 0) == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(sub_queue_share(cfg, 0, 1) == doctest::Approx(0.15).epsilon(1e-12));
    CHECK(sub_queue_share(cfg, 0, 2) == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(sub_queue_share(cfg, 0, 3) == doctest::Approx(0.05).epsilon(1e-12));
    double sum = 0.0;
    for (std::size_t j = 0; j < 4; ++j) {
        sum += sub_queue_share(cfg, 0, j);
    }
    CHECK(std::abs(sum - top_level_share(cfg, 0)) <= 1e-12);

    // One sub-queue per top queue degenerates to the top share.
    const PwfqConfig single = three_queue_config();
    CHECK(sub_queue_share(single, 1, 0) ==
          doctest::Approx(top_level_share(single, 1)).epsilon(1e-12));
}

TEST_CASE("config validation") {
    PwfqConfig cfg = three_queue_config();
    cfg.weights = {1.0, 2.0, 3.0}; // ascending: not allowed
    CHECK_THROWS_AS(PwfqRrScheduler{cfg}, std::invalid_argument);

    cfg = three_queue_config();
    cfg.weights[1] = -2.0;
    CHECK_THROWS_AS(PwfqRrScheduler{cfg}, std::invalid_argument);

    cfg = three_queue_config();
    cfg.classes.erase(TrafficClassKind::Data);
    CHECK_THROWS_AS(PwfqRrScheduler{cfg}, std::invalid_argument);

    cfg = three_queue_config();
    cfg.classes[TrafficClassKind::Data] = {5, 0};
    CHECK_THROWS_AS(PwfqRrScheduler{cfg}, std::invalid_argument);
}

TEST_CASE("measured shares converge to the formula shares") {
    const PwfqConfig cfg = three_queue_config();
    PwfqRrScheduler sched(cfg);
    const auto shares = measured_shares(sched, cfg, 10000, 500);
    CHECK(std::abs(shares.at(TrafficClassKind::Voice) - 0.5) <= 0.05);
    CHECK(std::abs(shares.at(TrafficClassKind::Video) - 1.0 / 3.0) <= 0.05);
    CHECK(std::abs(shares.at(TrafficClassKind::Data) - 1.0 / 6.0) <= 0.05);
}

TEST_CASE("sub-queue (1,1) of the worked example gets a fifth of the link") {
    PwfqConfig cfg = three_queue_config();
    cfg.priorities = {{4.0, 3.0, 2.0, 1.0}, {1.0}, {1.0}};
    cfg.classes = {{TrafficClassKind::Voice, {0, 0}},
                   {TrafficClassKind::Video, {0, 1}},
                   {TrafficClassKind::Data, {1, 0}}};
    // Backlogged sub-queues: (0,0) at 0.2, (0,1) at 0.15, (1,0) at 1/3.
    // Shares renormalize over the backlogged set.
    PwfqRrScheduler sched(cfg);
    const auto shares = measured_shares(sched, cfg, 10000, 500);
    const double active = 0.2 + 0.15 + 1.0 / 3.0;
    CHECK(std::abs(shares.at(TrafficClassKind::Voice) - 0.2 / active) <= 0.05);
    CHECK(std::abs(shares.at(TrafficClassKind::Video) - 0.15 / active) <= 0.05);
    CHECK(std::abs(shares.at(TrafficClassKind::Data) - (1.0 / 3.0) / active) <= 0.05);
}

TEST_CASE("work conservation when only the lowest queue is backlogged") {
    PwfqRrScheduler sched(three_queue_config());
    for (int i = 0; i < 50; ++i) {
        sched.enqueue(pkt(TrafficClassKind::Data, 500), SimTime());
    }
    for (int i = 0; i < 50; ++i) {
        auto p = sched.dequeue(SimTime());
        REQUIRE(p.has_value());
        CHECK(p->cls.kind == TrafficClassKind::Data);
    }
    CHECK_FALSE(sched.dequeue(SimTime()).has_value());
}

TEST_CASE("no sub-queue starves while continuously backlogged") {
    PwfqConfig cfg = three_queue_config();
    cfg.priorities = {{4.0, 3.0, 2.0, 1.0}, {1.0}, {1.0}};
    cfg.classes = {{TrafficClassKind::Voice, {0, 0}},
                   {TrafficClassKind::Video, {0, 3}},
                   {TrafficClassKind::Data, {2, 0}}};
    // Smallest active quantum: 0.1 s * 1 Mbps * 0.05 = 5000 bits, so a
    // 500 B packet departs from (0,3) every rotation.
    PwfqRrScheduler sched(cfg);
    const auto flat = flat_index_of(cfg);
    std::map<TrafficClassKind, std::set<std::uint64_t>> rotations_served;
    for (int i = 0; i < 2000; ++i) {
        const auto depths = sched.backlog();
        for (const auto& [cls, queue] : flat) {
            for (std::size_t n = depths[queue].packets; n < 8; ++n) {
                sched.enqueue(pkt(cls, 500), SimTime());
            }
        }
        auto p = sched.dequeue(SimTime());
        REQUIRE(p.has_value());
        rotations_served[p->cls.kind].insert(sched.last_serve_rotation());
    }
    const std::uint64_t completed = sched.rotations();
    REQUIRE(completed > 10);
    for (const auto& [cls, seen] : rotations_served) {
        for (std::uint64_t r = 1; r + 1 < completed; ++r) {
            CHECK(seen.count(r) == 1);
        }
    }
}

TEST_CASE("scaling all weights leaves shares and the dequeue sequence unchanged") {
    PwfqConfig a = three_queue_config();
    PwfqConfig b = three_queue_config();
    for (auto& w : b.weights) {
        w *= 7.5;
    }
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(top_level_share(a, i) == doctest::Approx(top_level_share(b, i)).epsilon(1e-12));
    }

    PwfqRrScheduler sa(a);
    PwfqRrScheduler sb(b);
    RandomStream rng(5);
    const TrafficClassKind kinds[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    std::vector<Packet> arrivals;
    for (int i = 0; i < 300; ++i) {
        arrivals.push_back(pkt(kinds[rng.next_u64() % 3],
                               static_cast<std::uint32_t>(rng.uniform(100, 1400))));
    }
    for (const auto& p : arrivals) {
        Packet c1 = p;
        Packet c2 = p;
        sa.enqueue(c1, SimTime());
        sb.enqueue(c2, SimTime());
    }
    while (true) {
        auto p1 = sa.dequeue(SimTime());
        auto p2 = sb.dequeue(SimTime());
        CHECK(p1.has_value() == p2.has_value());
        if (!p1 || !p2) {
            break;
        }
        CHECK(p1->id == p2->id);
    }
}

TEST_CASE("fifo order holds inside a sub-queue") {
    PwfqRrScheduler sched(three_queue_config());
    std::vector<std::uint64_t> voice_ids;
    for (int i = 0; i < 20; ++i) {
        auto p = pkt(TrafficClassKind::Voice, 500);
        voice_ids.push_back(p.id);
        sched.enqueue(p, SimTime());
        sched.enqueue(pkt(TrafficClassKind::Video, 500), SimTime());
    }
    std::vector<std::uint64_t> departed;
    while (auto p = sched.dequeue(SimTime())) {
        if (p->cls.kind == TrafficClassKind::Voice) {
            departed.push_back(p->id);
        }
    }
    CHECK(departed == voice_ids);
}

TEST_CASE("one sub-queue per top queue matches plain WFQ byte shares") {
    // Same weights, same saturated load: the nested scheduler with trivial
    // priorities must match the WFQ discipline within 1%.
    const PwfqConfig cfg = three_queue_config();
    PwfqRrScheduler nested(cfg);
    auto wfq = make_wfq(ClassQueueMap{{{TrafficClassKind::Voice},
                                       {TrafficClassKind::Video},
                                       {TrafficClassKind::Data}}},
                        {3.0, 2.0, 1.0}, 64);

    const TrafficClassKind kinds[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    std::map<TrafficClassKind, std::uint64_t> nested_bytes;
    std::map<TrafficClassKind, std::uint64_t> wfq_bytes;
    const auto flat = flat_index_of(cfg);
    for (int i = 0; i < 12000; ++i) {
        const auto depths = nested.backlog();
        for (const auto& [cls, queue] : flat) {
            for (std::size_t n = depths[queue].packets; n < 8; ++n) {
                nested.enqueue(pkt(cls, 500), SimTime());
            }
        }
        const auto wdepths = wfq->backlog();
        for (std::size_t q = 0; q < 3; ++q) {
            for (std::size_t n = wdepths[q].packets; n < 8; ++n) {
                wfq->enqueue(pkt(kinds[q], 500), SimTime());
            }
        }
        auto p1 = nested.dequeue(SimTime());
        auto p2 = wfq->dequeue(SimTime());
        REQUIRE(p1.has_value());
        REQUIRE(p2.has_value());
        nested_bytes[p1->cls.kind] += p1->size_bits / 8;
        wfq_bytes[p2->cls.kind] += p2->size_bits / 8;
    }
    std::uint64_t nested_total = 0;
    std::uint64_t wfq_total = 0;
    for (auto kind : kinds) {
        nested_total += nested_bytes[kind];
        wfq_total += wfq_bytes[kind];
    }
    for (auto kind : kinds) {
        const double a =
            static_cast<double>(nested_bytes[kind]) / static_cast<double>(nested_total);
        const double b =
            static_cast<double>(wfq_bytes[kind]) / static_cast<double>(wfq_total);
        CHECK(std::abs(a - b) <= 0.01);
    }
}

} // TEST_SUITE
