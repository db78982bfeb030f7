#ifndef QSIM_METRICS_HPP
#define QSIM_METRICS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qsim/packet.hpp"

namespace qsim {

enum class PacketFate { InFlight, Delivered, Dropped };

// One row per emitted packet: what it was and what happened to it.
// Packets still traveling when the run ends stay InFlight.
struct PacketRecord {
    std::uint64_t id = 0;
    std::uint32_t flow_id = 0;
    TrafficClassKind cls = TrafficClassKind::Data;
    std::uint64_t size_bits = 0;
    double created_s = 0.0;
    PacketFate fate = PacketFate::InFlight;
    double fate_s = 0.0;      // delivery or drop time
    std::string drop_site;    // egress id or node id
    std::string drop_reason;  // tail_drop | no_route
};

// Contiguous fixed-width buckets; counts and bits per bucket.
struct TimeSeries {
    double bucket_s = 1.0;
    std::vector<std::uint64_t> counts;
    std::vector<std::uint64_t> bits;
};

struct DropGroup {
    std::string site;
    std::string reason;
    std::vector<std::uint64_t> counts;
};

// Drop counts per bucket, broken out by drop site and reason. Groups are
// ordered by (site, reason) so emitted files are stable.
struct DropSeries {
    double bucket_s = 1.0;
    std::size_t buckets = 0;
    std::vector<DropGroup> groups;
};

DropSeries drops_over_time(const std::vector<PacketRecord>& records, double bucket_s);

std::uint64_t total_drops(const DropSeries& series);

// Delivered packets (and bits) of one class per bucket.
TimeSeries received_per_class(const std::vector<PacketRecord>& records,
                              TrafficClassKind cls, double bucket_s);

std::uint64_t total_count(const TimeSeries& series);

// Running mean of end-to-end delay over the class's deliveries, one point
// per delivered packet in delivery order.
struct DelayPoint {
    double time_s = 0.0;
    double delay_s = 0.0;
    double running_mean_s = 0.0;
};

std::vector<DelayPoint> time_average_delay(const std::vector<PacketRecord>& records,
                                           TrafficClassKind cls);

struct ClassSummary {
    TrafficClassKind cls = TrafficClassKind::Data;
    std::uint64_t offered_pkts = 0;
    std::uint64_t delivered_pkts = 0;
    std::uint64_t dropped_pkts = 0;
    double mean_delay_s = 0.0;
    double p99_delay_s = 0.0;
};

// One row per traffic class (voice, video, data order).
std::vector<ClassSummary> summarize(const std::vector<PacketRecord>& records);

} // namespace qsim

#endif // QSIM_METRICS_HPP
