#include "doctest.h"

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "qsim/rng.hpp"
#include "qsim/rsvp.hpp"
#include "qsim/schedulers.hpp"

using namespace qsim;

namespace {

// h1 - r1 - r2 - h2 chain with a configurable middle link.
class ChainNet : public RsvpNet {
public:
    explicit ChainNet(std::uint64_t bottleneck_bps) : bottleneck_(bottleneck_bps) {}

    std::vector<std::string> path_nodes(const std::string& from,
                                        const std::string& to) const override {
        const std::vector<std::string> chain{"h1", "r1", "r2", "h2"};
        auto a = std::find(chain.begin(), chain.end(), from);
        auto b = std::find(chain.begin(), chain.end(), to);
        if (a == chain.end() || b == chain.end()) {
            return {};
        }
        std::vector<std::string> out;
        if (a <= b) {
            out.assign(a, b + 1);
        } else {
            out.assign(b, a + 1);
            std::reverse(out.begin(), out.end());
        }
        return out;
    }

    bool is_router(const std::string& node) const override {
        return node == "r1" || node == "r2";
    }

    std::uint64_t egress_rate_bps(const std::string& node,
                                  const std::string& next_hop) const override {
        if ((node == "r1" && next_hop == "r2") || (node == "r2" && next_hop == "r1")) {
            return bottleneck_;
        }
        return 100'000'000;
    }

private:
    std::uint64_t bottleneck_;
};

PathMsg path_msg(std::uint32_t flow, double rate_bps, std::uint64_t burst = 800) {
    PathMsg m;
    m.flow_id = flow;
    m.tspec = {rate_bps, burst};
    m.sender = "h1";
    m.receiver = "h2";
    return m;
}

ResvMsg resv_from(const PathResult& pr, std::uint32_t flow, double rate_bps,
                  std::uint64_t burst = 800) {
    ResvMsg m;
    m.flow_id = flow;
    m.tspec = {rate_bps, burst};
    m.reverse_hops.assign(pr.router_hops.rbegin(), pr.router_hops.rend());
    return m;
}

Packet flow_packet(std::uint32_t flow, std::uint32_t bytes, double t,
                   TrafficClassKind cls = TrafficClassKind::Voice) {
    static std::uint64_t next_id = 1;
    return Packet::make(next_id++, flow, std::uint64_t{bytes} * 8, Ipv6Marking{},
                        TrafficClass{cls}, SimTime::seconds(t));
}

} // namespace

TEST_SUITE("rsvp-lite") {

TEST_CASE("path propagation accumulates the router hop list") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    REQUIRE(pr.delivered);
    CHECK(pr.router_hops == std::vector<std::string>{"r1", "r2"});
    CHECK(agent.has_path_state("r1", 1));
    CHECK(agent.has_path_state("r2", 1));
}

TEST_CASE("unroutable path is dropped with a diagnostic") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    auto msg = path_msg(1, 64000);
    msg.receiver = "nowhere";
    const auto pr = agent.propagate_path(msg, SimTime());
    CHECK_FALSE(pr.delivered);
    CHECK_FALSE(pr.error.empty());
}

TEST_CASE("path refresh extends the soft-state deadline") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net); // 30 s period, 3 periods -> 90 s timeout
    agent.propagate_path(path_msg(1, 64000), SimTime());
    agent.propagate_path(path_msg(1, 64000), SimTime::seconds(50.0));
    agent.expire(SimTime::seconds(100.0)); // original deadline was 90
    CHECK(agent.has_path_state("r1", 1));
    agent.expire(SimTime::seconds(140.0)); // refreshed deadline 50 + 90
    CHECK_FALSE(agent.has_path_state("r1", 1));
}

TEST_CASE("unrefreshed path state expires after three periods") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    agent.propagate_path(path_msg(1, 64000), SimTime());
    agent.expire(SimTime::seconds(89.9));
    CHECK(agent.has_path_state("r1", 1));
    agent.expire(SimTime::seconds(90.0));
    CHECK_FALSE(agent.has_path_state("r1", 1));
}

TEST_CASE("admission accepts under the reservable limit") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    const auto rr = agent.send_resv(resv_from(pr, 1, 64000), SimTime());
    CHECK(rr.outcome == AdmissionOutcome::Accepted);
    CHECK(agent.has_reservation("r1", 1));
    CHECK(agent.has_reservation("r2", 1));
    CHECK(agent.flow_granted(1, SimTime::seconds(1.0)));
}

TEST_CASE("the 1.158 Mbps limit rejects 1.1M plus 64k exactly") {
    ChainNet net(1'544'000); // limit = 0.75 * 1.544M = 1.158M
    RsvpAgent agent(net);
    const auto pr1 = agent.propagate_path(path_msg(1, 1'100'000), SimTime());
    REQUIRE(agent.send_resv(resv_from(pr1, 1, 1'100'000), SimTime()).outcome ==
            AdmissionOutcome::Accepted);

    const auto pr2 = agent.propagate_path(path_msg(2, 64000), SimTime());
    const auto rr = agent.send_resv(resv_from(pr2, 2, 64000), SimTime());
    CHECK(rr.outcome == AdmissionOutcome::RejectedCapacity);
    CHECK(rr.rejecting_router == "r1");
    CHECK(agent.reserved_bps("r1", "r2") == doctest::Approx(1'100'000.0));

    // Just inside the limit is accepted: 1.1M + 58k = 1.158M.
    const auto pr3 = agent.propagate_path(path_msg(3, 58000), SimTime());
    CHECK(agent.send_resv(resv_from(pr3, 3, 58000), SimTime()).outcome ==
          AdmissionOutcome::Accepted);
}

TEST_CASE("resv without path state is rejected distinctly") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    ResvMsg m;
    m.flow_id = 9;
    m.tspec = {64000.0, 800};
    m.reverse_hops = {"r2", "r1"};
    const auto rr = agent.send_resv(m, SimTime());
    CHECK(rr.outcome == AdmissionOutcome::RejectedNoPathState);
}

TEST_CASE("rejection leaves no partial reservation anywhere") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr1 = agent.propagate_path(path_msg(1, 1'100'000), SimTime());
    REQUIRE(agent.send_resv(resv_from(pr1, 1, 1'100'000), SimTime()).outcome ==
            AdmissionOutcome::Accepted);

    // r2's egress is the fat access link, so the walk accepts at r2 first
    // and then fails at r1's bottleneck egress.
    const auto pr2 = agent.propagate_path(path_msg(2, 100'000), SimTime());
    const auto rr = agent.send_resv(resv_from(pr2, 2, 100'000), SimTime());
    CHECK(rr.outcome == AdmissionOutcome::RejectedCapacity);
    CHECK(rr.rejecting_router == "r1");
    CHECK_FALSE(agent.has_reservation("r1", 2));
    CHECK_FALSE(agent.has_reservation("r2", 2));
    CHECK_FALSE(agent.flow_granted(2, SimTime()));
}

TEST_CASE("resv rate above the advertised path rate is a contract violation") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    CHECK_THROWS_AS(agent.send_resv(resv_from(pr, 1, 128000), SimTime()),
                    std::invalid_argument);
}

TEST_CASE("ceasing refreshes releases every grant within three periods") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    agent.send_resv(resv_from(pr, 1, 64000), SimTime());
    CHECK(agent.flow_granted(1, SimTime::seconds(1.0)));

    agent.expire(SimTime::seconds(90.0));
    CHECK_FALSE(agent.flow_granted(1, SimTime::seconds(90.0)));
    CHECK(agent.reserved_bps("r1", "r2") == doctest::Approx(0.0));
}

TEST_CASE("token bucket caps conforming bytes at rate times T plus depth") {
    TokenBucket bucket(64000.0, 6400.0);
    double conforming_bits = 0.0;
    int conform = 0;
    int total = 0;
    // 128 kbps offered against a 64 kbps bucket: 1600-bit packets every 12.5 ms.
    for (int i = 0; i * 0.0125 <= 120.0; ++i) {
        const SimTime t = SimTime::seconds(i * 0.0125);
        ++total;
        if (bucket.conforms(1600, t)) {
            ++conform;
            conforming_bits += 1600.0;
        }
    }
    const double frac = static_cast<double>(conform) / total;
    CHECK(frac >= 0.45);
    CHECK(frac <= 0.55);
    CHECK(conforming_bits <= 64000.0 * 120.0 + 6400.0 + 1600.0);
}

TEST_CASE("conforming reserved packets ride the guaranteed queue") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    agent.send_resv(resv_from(pr, 1, 64000), SimTime());

    RsvpScheduler sched(std::make_unique<FifoScheduler>(64), agent, "r1", 64);
    // Best-effort backlog from an unreserved flow.
    for (int i = 0; i < 5; ++i) {
        sched.enqueue(flow_packet(7, 500, 0.0, TrafficClassKind::Data), SimTime());
    }
    auto reserved = flow_packet(1, 200, 0.0);
    sched.enqueue(reserved, SimTime());
    const auto first = sched.dequeue(SimTime());
    REQUIRE(first.has_value());
    CHECK(first->id == reserved.id);
    // The remaining dequeues drain best effort.
    CHECK(sched.dequeue(SimTime())->flow_id == 7);
}

TEST_CASE("a reserved flow at twice its rate has half demoted") {
    ChainNet net(1'544'000);
    RsvpAgent::Config cfg;
    cfg.refresh_period_s = 60.0; // grant outlives the 120 s measurement window
    RsvpAgent agent(net, cfg);
    const auto pr = agent.propagate_path(path_msg(1, 64000), SimTime());
    agent.send_resv(resv_from(pr, 1, 64000), SimTime());

    int guaranteed = 0;
    int total = 0;
    for (int i = 0; i * 0.0125 <= 120.0; ++i) {
        const SimTime t = SimTime::seconds(0.001 + i * 0.0125);
        ++total;
        if (agent.classify_guaranteed("r1", 1, 1600, t)) {
            ++guaranteed;
        }
    }
    const double frac = static_cast<double>(guaranteed) / total;
    CHECK(frac >= 0.45);
    CHECK(frac <= 0.55);
}

TEST_CASE("non-reserved flows never use the guaranteed queue") {
    ChainNet net(1'544'000);
    RsvpAgent agent(net);
    CHECK_FALSE(agent.classify_guaranteed("r1", 12, 1600, SimTime::seconds(1.0)));
}

TEST_CASE("randomized admission never exceeds the reservable fraction") {
    ChainNet net(1'544'000);
    const double limit = 1'544'000 * 0.75;
    RsvpAgent agent(net);
    RandomStream rng(77);
    std::uint32_t next_flow = 1;
    std::vector<std::uint32_t> active;
    double now = 0.0;
    for (int step = 0; step < 2000; ++step) {
        now += rng.exponential(5.0);
        const double u = rng.next_unit();
        if (u < 0.55) {
            const std::uint32_t flow = next_flow++;
            const double rate = rng.uniform(10'000, 400'000);
            const auto pr = agent.propagate_path(path_msg(flow, rate), SimTime::seconds(now));
            const auto rr =
                agent.send_resv(resv_from(pr, flow, rate), SimTime::seconds(now));
            if (rr.outcome == AdmissionOutcome::Accepted) {
                active.push_back(flow);
            }
        } else if (u < 0.8 && !active.empty()) {
            const std::size_t k = rng.next_u64() % active.size();
            agent.release(active[k]);
            active.erase(active.begin() + static_cast<std::ptrdiff_t>(k));
        } else {
            agent.expire(SimTime::seconds(now));
            std::erase_if(active, [&](std::uint32_t flow) {
                return !agent.flow_granted(flow, SimTime::seconds(now));
            });
        }
        CHECK(agent.reserved_bps("r1", "r2") <= limit + 1e-6);
        CHECK(agent.reserved_bps("r2", "h2") <= 100'000'000 * 0.75 + 1e-6);
    }
}

} // TEST_SUITE
