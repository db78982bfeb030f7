#include "qsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace qsim {

namespace {

std::size_t bucket_of(double t, double bucket_s) {
    return static_cast<std::size_t>(t / bucket_s);
}

} // namespace

DropSeries drops_over_time(const std::vector<PacketRecord>& records, double bucket_s) {
    if (bucket_s <= 0.0) {
        throw std::invalid_argument("drops_over_time: bucket width must be positive");
    }
    DropSeries series;
    series.bucket_s = bucket_s;
    std::map<std::pair<std::string, std::string>, std::vector<std::uint64_t>> grouped;
    for (const auto& rec : records) {
        if (rec.fate != PacketFate::Dropped) {
            continue;
        }
        const std::size_t b = bucket_of(rec.fate_s, bucket_s);
        series.buckets = std::max(series.buckets, b + 1);
        auto& counts = grouped[{rec.drop_site, rec.drop_reason}];
        if (counts.size() <= b) {
            counts.resize(b + 1, 0);
        }
        ++counts[b];
    }
    for (auto& [key, counts] : grouped) {
        counts.resize(series.buckets, 0);
        series.groups.push_back(DropGroup{key.first, key.second, std::move(counts)});
    }
    return series;
}

std::uint64_t total_drops(const DropSeries& series) {
    std::uint64_t total = 0;
    for (const auto& group : series.groups) {
        for (std::uint64_t c : group.counts) {
            total += c;
        }
    }
    return total;
}

TimeSeries received_per_class(const std::vector<PacketRecord>& records,
                              TrafficClassKind cls, double bucket_s) {
    if (bucket_s <= 0.0) {
        throw std::invalid_argument("received_per_class: bucket width must be positive");
    }
    TimeSeries series;
    series.bucket_s = bucket_s;
    for (const auto& rec : records) {
        if (rec.fate != PacketFate::Delivered || rec.cls != cls) {
            continue;
        }
        const std::size_t b = bucket_of(rec.fate_s, bucket_s);
        if (series.counts.size() <= b) {
            series.counts.resize(b + 1, 0);
            series.bits.resize(b + 1, 0);
        }
        ++series.counts[b];
        series.bits[b] += rec.size_bits;
    }
    return series;
}

std::uint64_t total_count(const TimeSeries& series) {
    std::uint64_t total = 0;
    for (std::uint64_t c : series.counts) {
        total += c;
    }
    return total;
}

std::vector<DelayPoint> time_average_delay(const std::vector<PacketRecord>& records,
                                           TrafficClassKind cls) {
    std::vector<const PacketRecord*> delivered;
    for (const auto& rec : records) {
        if (rec.fate == PacketFate::Delivered && rec.cls == cls) {
            delivered.push_back(&rec);
        }
    }
    std::sort(delivered.begin(), delivered.end(),
              [](const PacketRecord* a, const PacketRecord* b) {
                  if (a->fate_s != b->fate_s) {
                      return a->fate_s < b->fate_s;
                  }
                  return a->id < b->id;
              });
    std::vector<DelayPoint> points;
    points.reserve(delivered.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < delivered.size(); ++k) {
        const double delay = delivered[k]->fate_s - delivered[k]->created_s;
        sum += delay;
        points.push_back(
            DelayPoint{delivered[k]->fate_s, delay, sum / static_cast<double>(k + 1)});
    }
    return points;
}

std::vector<ClassSummary> summarize(const std::vector<PacketRecord>& records) {
    const TrafficClassKind order[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    std::vector<ClassSummary> out;
    for (TrafficClassKind cls : order) {
        ClassSummary s;
        s.cls = cls;
        std::vector<double> delays;
        for (const auto& rec : records) {
            if (rec.cls != cls) {
                continue;
            }
            ++s.offered_pkts;
            if (rec.fate == PacketFate::Delivered) {
                ++s.delivered_pkts;
                delays.push_back(rec.fate_s - rec.created_s);
            } else if (rec.fate == PacketFate::Dropped) {
                ++s.dropped_pkts;
            }
        }
        if (!delays.empty()) {
            double sum = 0.0;
            for (double d : delays) {
                sum += d;
            }
            s.mean_delay_s = sum / static_cast<double>(delays.size());
            std::sort(delays.begin(), delays.end());
            const auto rank = static_cast<std::size_t>(
                std::ceil(0.99 * static_cast<double>(delays.size())));
            s.p99_delay_s = delays[std::min(delays.size() - 1, rank == 0 ? 0 : rank - 1)];
        }
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace qsim
