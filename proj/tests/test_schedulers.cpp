#include "doctest.h"

#include <cmath>
#include <memory>
#include <utility>
#include <vector>

#include "qsim/schedulers.hpp"
#include "support/property_harness.hpp"

using namespace qsim;

namespace {

std::uint64_t g_next_id = 1;

Packet pkt(TrafficClassKind cls, std::uint32_t bytes, double t = 0.0) {
    return Packet::make(g_next_id++, 1, std::uint64_t{bytes} * 8, Ipv6Marking{},
                        TrafficClass{cls}, SimTime::seconds(t));
}

ClassQueueMap three_classes() {
    return ClassQueueMap{{{TrafficClassKind::Voice},
                          {TrafficClassKind::Video},
                          {TrafficClassKind::Data}}};
}

ClassQueueMap two_classes() {
    return ClassQueueMap{{{TrafficClassKind::Voice, TrafficClassKind::Video},
                          {TrafficClassKind::Data}}};
}

} // namespace

TEST_SUITE("schedulers") {

TEST_CASE("fifo preserves arrival order") {
    FifoScheduler fifo(8);
    auto a = pkt(TrafficClassKind::Data, 100);
    auto b = pkt(TrafficClassKind::Voice, 100);
    auto c = pkt(TrafficClassKind::Video, 100);
    CHECK(fifo.enqueue(a, SimTime()).accepted());
    CHECK(fifo.enqueue(b, SimTime()).accepted());
    CHECK(fifo.enqueue(c, SimTime()).accepted());
    CHECK(fifo.dequeue(SimTime())->id == a.id);
    CHECK(fifo.dequeue(SimTime())->id == b.id);
    CHECK(fifo.dequeue(SimTime())->id == c.id);
    CHECK_FALSE(fifo.dequeue(SimTime()).has_value());
}

TEST_CASE("fifo tail drops when full") {
    FifoScheduler fifo(2);
    CHECK(fifo.enqueue(pkt(TrafficClassKind::Data, 100), SimTime()).accepted());
    CHECK(fifo.enqueue(pkt(TrafficClassKind::Data, 100), SimTime()).accepted());
    const auto res = fifo.enqueue(pkt(TrafficClassKind::Data, 100), SimTime());
    REQUIRE_FALSE(res.accepted());
    CHECK(*res.dropped == DropReason::TailDrop);
    CHECK(fifo.backlog_packets() == 2);
}

TEST_CASE("pq serves the highest precedence first, FIFO within a level") {
    PqScheduler pq(three_classes(), 8);
    auto d = pkt(TrafficClassKind::Data, 100);
    auto v1 = pkt(TrafficClassKind::Voice, 100);
    auto v2 = pkt(TrafficClassKind::Voice, 100);
    pq.enqueue(d, SimTime());
    pq.enqueue(v1, SimTime());
    pq.enqueue(v2, SimTime());
    CHECK(pq.dequeue(SimTime())->id == v1.id);
    CHECK(pq.dequeue(SimTime())->id == v2.id);
    CHECK(pq.dequeue(SimTime())->id == d.id);
}

TEST_CASE("pq does not starve the only backlogged class") {
    PqScheduler pq(three_classes(), 8);
    auto d = pkt(TrafficClassKind::Data, 100);
    pq.enqueue(d, SimTime());
    CHECK(pq.dequeue(SimTime())->id == d.id);
}

TEST_CASE("cq serves quantum worth of packets per class per round") {
    // 1500 B quantum, 500 B packets: three per class per visit.
    auto cq = make_cq(two_classes(), {1500.0, 1500.0}, 64);
    std::vector<std::uint64_t> video_ids;
    std::vector<std::uint64_t> data_ids;
    for (int i = 0; i < 6; ++i) {
        auto v = pkt(TrafficClassKind::Video, 500);
        auto d = pkt(TrafficClassKind::Data, 500);
        video_ids.push_back(v.id);
        data_ids.push_back(d.id);
        cq->enqueue(v, SimTime());
        cq->enqueue(d, SimTime());
    }
    std::vector<std::uint64_t> order;
    for (int i = 0; i < 12; ++i) {
        order.push_back(cq->dequeue(SimTime())->id);
    }
    const std::vector<std::uint64_t> expected{
        video_ids[0], video_ids[1], video_ids[2], data_ids[0], data_ids[1], data_ids[2],
        video_ids[3], video_ids[4], video_ids[5], data_ids[3], data_ids[4], data_ids[5]};
    CHECK(order == expected);
}

TEST_CASE("cq carries the deficit for an oversized head packet") {
    // Head of 1600 B does not fit one 1500 B quantum: skipped on the first
    // visit, departs on the second once the deficit reaches 3000 B.
    auto cq = make_cq(two_classes(), {1500.0, 1500.0}, 64);
    auto big = pkt(TrafficClassKind::Video, 1600);
    cq->enqueue(big, SimTime());
    std::vector<std::uint64_t> data_ids;
    for (int i = 0; i < 4; ++i) {
        auto d = pkt(TrafficClassKind::Data, 500);
        data_ids.push_back(d.id);
        cq->enqueue(d, SimTime());
    }
    CHECK(cq->dequeue(SimTime())->id == data_ids[0]);
    CHECK(cq->dequeue(SimTime())->id == data_ids[1]);
    CHECK(cq->dequeue(SimTime())->id == data_ids[2]);
    CHECK(cq->dequeue(SimTime())->id == big.id);
    CHECK(cq->dequeue(SimTime())->id == data_ids[3]);
}

TEST_CASE("single backlogged class owns the link") {
    auto cq = make_cq(two_classes(), {1500.0, 1500.0}, 64);
    for (int i = 0; i < 10; ++i) {
        cq->enqueue(pkt(TrafficClassKind::Data, 500), SimTime());
    }
    for (int i = 0; i < 10; ++i) {
        CHECK(cq->dequeue(SimTime())->cls.kind == TrafficClassKind::Data);
    }
}

TEST_CASE("wfq rejects non-positive weights") {
    CHECK_THROWS_AS(make_wfq(two_classes(), {0.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(make_wfq(two_classes(), {-1.0, 1.0}), std::invalid_argument);
}

namespace {

// Byte share of each class after `departures` dequeues with both queues
// kept continuously backlogged with equal packet sizes.
std::pair<double, double> wfq_shares(std::vector<double> weights, int departures) {
    auto wfq = make_wfq(two_classes(), std::move(weights), 64);
    std::uint64_t bytes[2] = {0, 0};
    auto top_up = [&] {
        auto depths = wfq->backlog();
        while (depths[0].packets < 10) {
            wfq->enqueue(pkt(TrafficClassKind::Video, 500), SimTime());
            depths = wfq->backlog();
        }
        while (depths[1].packets < 10) {
            wfq->enqueue(pkt(TrafficClassKind::Data, 500), SimTime());
            depths = wfq->backlog();
        }
    };
    for (int i = 0; i < departures; ++i) {
        top_up();
        auto p = wfq->dequeue(SimTime());
        REQUIRE(p.has_value());
        bytes[p->cls.kind == TrafficClassKind::Data ? 1 : 0] += p->size_bits / 8;
    }
    const double total = static_cast<double>(bytes[0] + bytes[1]);
    return {static_cast<double>(bytes[0]) / total, static_cast<double>(bytes[1]) / total};
}

} // namespace

TEST_CASE("wfq equal weights split the link evenly") {
    const auto [a, b] = wfq_shares({1.0, 1.0}, 10000);
    CHECK(a == doctest::Approx(0.5).epsilon(0.05));
    CHECK(b == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("wfq 1:3 weights converge to the fluid shares") {
    // Fluid oracle: a continuously backlogged queue owns w_i / sum(w).
    const double expected_hi = 3.0 / 4.0;
    const double expected_lo = 1.0 / 4.0;
    const auto [video, data] = wfq_shares({3.0, 1.0}, 10000);
    CHECK(std::abs(video - expected_hi) <= 0.05);
    CHECK(std::abs(data - expected_lo) <= 0.05);
}

TEST_CASE("wfq gives an idle competitor's bandwidth away") {
    auto wfq = make_wfq(two_classes(), {1.0, 3.0}, 64);
    for (int i = 0; i < 20; ++i) {
        wfq->enqueue(pkt(TrafficClassKind::Video, 500), SimTime());
    }
    for (int i = 0; i < 20; ++i) {
        CHECK(wfq->dequeue(SimTime())->cls.kind == TrafficClassKind::Video);
    }
}

TEST_CASE("llq exhausts the low latency queue first") {
    LlqScheduler llq(make_wfq(three_classes(), {1.0, 1.0, 1.0}, 64),
                     {TrafficClassKind::Voice}, 64);
    for (int i = 0; i < 10; ++i) {
        llq.enqueue(pkt(TrafficClassKind::Video, 500), SimTime());
    }
    auto voice = pkt(TrafficClassKind::Voice, 200);
    llq.enqueue(voice, SimTime());
    CHECK(llq.dequeue(SimTime())->id == voice.id);

    // Voice arriving mid-service of the inner queues jumps the line.
    CHECK(llq.dequeue(SimTime())->cls.kind == TrafficClassKind::Video);
    auto voice2 = pkt(TrafficClassKind::Voice, 200);
    llq.enqueue(voice2, SimTime());
    CHECK(llq.dequeue(SimTime())->id == voice2.id);
}

TEST_CASE("llq with an empty low latency queue matches the bare inner scheduler") {
    LlqScheduler wrapped(make_wfq(three_classes(), {2.0, 1.0, 1.0}, 256),
                         {TrafficClassKind::Voice}, 256);
    auto bare = make_wfq(three_classes(), {2.0, 1.0, 1.0}, 256);

    RandomStream rng(17);
    std::vector<Packet> arrivals;
    for (int i = 0; i < 200; ++i) {
        const auto cls =
            rng.next_unit() < 0.5 ? TrafficClassKind::Video : TrafficClassKind::Data;
        arrivals.push_back(pkt(cls, static_cast<std::uint32_t>(rng.uniform(100, 1200))));
    }
    for (const auto& p : arrivals) {
        Packet copy = p;
        wrapped.enqueue(copy, SimTime());
        bare->enqueue(copy, SimTime());
    }
    for (int i = 0; i < 200; ++i) {
        auto a = wrapped.dequeue(SimTime());
        auto b = bare->dequeue(SimTime());
        REQUIRE(a.has_value());
        REQUIRE(b.has_value());
        CHECK(a->id == b->id);
    }
}

TEST_CASE("class map validation catches bad configs") {
    CHECK_THROWS_AS(ClassQueueMap{{{TrafficClassKind::Voice}}}.validate(),
                    std::invalid_argument);
    ClassQueueMap doubled{{{TrafficClassKind::Voice, TrafficClassKind::Voice},
                           {TrafficClassKind::Video},
                           {TrafficClassKind::Data}}};
    CHECK_THROWS_AS(doubled.validate(), std::invalid_argument);
    CHECK_NOTHROW(three_classes().validate());
}

// Randomized operation sequences; the heavyweight 1000-sequence pass lives
// in the acceptance suite, this is the fast regression version.
TEST_CASE("property sequences hold for every discipline") {
    RandomStream rng(2024);
    std::vector<std::string> violations;
    for (int seq = 0; seq < 200; ++seq) {
        {
            FifoScheduler fifo(8);
            testprop::SchedulerUnderTest sut;
            sut.sched = &fifo;
            sut.global_fifo = true;
            testprop::run_sequence(sut, rng, 60, violations);
        }
        {
            PqScheduler pq(three_classes(), 8);
            testprop::SchedulerUnderTest sut;
            sut.sched = &pq;
            sut.strict_priority = true;
            testprop::run_sequence(sut, rng, 60, violations);
        }
        {
            DrrScheduler cq("cq", three_classes(), {1500.0, 1000.0, 500.0}, 8);
            testprop::SchedulerUnderTest sut;
            sut.sched = &cq;
            sut.quanta_bytes = {1500.0, 1000.0, 500.0};
            sut.last_serve_rotation = [&] { return cq.last_serve_rotation(); };
            sut.queue_of = [](TrafficClassKind cls) {
                return static_cast<std::size_t>(cls);
            };
            testprop::run_sequence(sut, rng, 60, violations);
        }
        {
            LlqScheduler llq(make_wfq(three_classes(), {2.0, 1.0, 1.0}, 8),
                             {TrafficClassKind::Voice}, 8);
            testprop::SchedulerUnderTest sut;
            sut.sched = &llq;
            sut.llq_classes = {TrafficClassKind::Voice};
            sut.llq_backlog = [&] { return llq.llq_backlog(); };
            testprop::run_sequence(sut, rng, 60, violations);
        }
    }
    for (const auto& v : violations) {
        MESSAGE(v);
    }
    CHECK(violations.empty());
}

} // TEST_SUITE
