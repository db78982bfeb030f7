#include "qsim/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace qsim {

std::string format_sig9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path, std::ios::binary); // binary keeps LF endings everywhere
    if (!out) {
        throw std::runtime_error("cannot write " + path);
    }
    return out;
}

std::vector<std::vector<std::string>> read_rows(const std::string& path,
                                                const std::string& expected_header) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot read " + path);
    }
    std::string line;
    if (!std::getline(in, line) || line != expected_header) {
        throw std::runtime_error(path + ": unexpected header");
    }
    std::vector<std::vector<std::string>> rows;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            fields.push_back(field);
        }
        rows.push_back(std::move(fields));
    }
    return rows;
}

} // namespace

std::vector<DropsRow> drops_rows(const DropSeries& series) {
    std::vector<DropsRow> rows;
    for (std::size_t b = 0; b < series.buckets; ++b) {
        for (const auto& group : series.groups) {
            rows.push_back(DropsRow{static_cast<double>(b) * series.bucket_s, group.site,
                                    group.reason, group.counts[b]});
        }
    }
    return rows;
}

std::vector<DeliveredRow> delivered_rows(const std::vector<PacketRecord>& records,
                                         double bucket_s) {
    const TrafficClassKind order[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    TimeSeries series[3];
    std::size_t buckets = 0;
    for (int c = 0; c < 3; ++c) {
        series[c] = received_per_class(records, order[c], bucket_s);
        buckets = std::max(buckets, series[c].counts.size());
    }
    std::vector<DeliveredRow> rows;
    for (std::size_t b = 0; b < buckets; ++b) {
        for (int c = 0; c < 3; ++c) {
            DeliveredRow row;
            row.time_bucket_start_s = static_cast<double>(b) * bucket_s;
            row.cls = traffic_class_name(order[c]);
            if (b < series[c].counts.size()) {
                row.packets = series[c].counts[b];
                row.bits = series[c].bits[b];
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

std::vector<DelayRow> delay_rows(const std::vector<PacketRecord>& records) {
    const TrafficClassKind order[] = {TrafficClassKind::Voice, TrafficClassKind::Video,
                                      TrafficClassKind::Data};
    std::vector<DelayRow> rows;
    std::vector<std::pair<double, DelayRow>> merged;
    for (TrafficClassKind cls : order) {
        for (const auto& point : time_average_delay(records, cls)) {
            merged.push_back({point.time_s, DelayRow{point.time_s, traffic_class_name(cls),
                                                     point.delay_s, point.running_mean_s}});
        }
    }
    std::stable_sort(merged.begin(), merged.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    rows.reserve(merged.size());
    for (auto& [t, row] : merged) {
        rows.push_back(std::move(row));
    }
    return rows;
}

std::vector<SummaryRow> summary_rows(const std::vector<PacketRecord>& records,
                                     const std::string& scheduler) {
    std::vector<SummaryRow> rows;
    for (const auto& s : summarize(records)) {
        rows.push_back(SummaryRow{scheduler, traffic_class_name(s.cls), s.offered_pkts,
                                  s.delivered_pkts, s.dropped_pkts, s.mean_delay_s,
                                  s.p99_delay_s});
    }
    return rows;
}

void write_drops_csv(const std::string& path, const std::vector<DropsRow>& rows) {
    auto out = open_out(path);
    out << "time_bucket_start_s,site,reason,count\n";
    for (const auto& r : rows) {
        out << format_sig9(r.time_bucket_start_s) << ',' << r.site << ',' << r.reason << ','
            << r.count << '\n';
    }
}

void write_delivered_csv(const std::string& path, const std::vector<DeliveredRow>& rows) {
    auto out = open_out(path);
    out << "time_bucket_start_s,class,packets,bits\n";
    for (const auto& r : rows) {
        out << format_sig9(r.time_bucket_start_s) << ',' << r.cls << ',' << r.packets << ','
            << r.bits << '\n';
    }
}

void write_delay_csv(const std::string& path, const std::vector<DelayRow>& rows) {
    auto out = open_out(path);
    out << "delivery_time_s,class,packet_delay_s,running_mean_s\n";
    for (const auto& r : rows) {
        out << format_sig9(r.delivery_time_s) << ',' << r.cls << ','
            << format_sig9(r.packet_delay_s) << ',' << format_sig9(r.running_mean_s) << '\n';
    }
}

void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    auto out = open_out(path);
    out << "scheduler,class,offered_pkts,delivered_pkts,dropped_pkts,mean_delay_s,p99_delay_s\n";
    for (const auto& r : rows) {
        out << r.scheduler << ',' << r.cls << ',' << r.offered_pkts << ','
            << r.delivered_pkts << ',' << r.dropped_pkts << ',' << format_sig9(r.mean_delay_s)
            << ',' << format_sig9(r.p99_delay_s) << '\n';
    }
}

std::vector<DropsRow> read_drops_csv(const std::string& path) {
    std::vector<DropsRow> rows;
    for (const auto& f : read_rows(path, "time_bucket_start_s,site,reason,count")) {
        if (f.size() != 4) {
            throw std::runtime_error(path + ": malformed row");
        }
        rows.push_back(DropsRow{std::stod(f[0]), f[1], f[2], std::stoull(f[3])});
    }
    return rows;
}

std::vector<DeliveredRow> read_delivered_csv(const std::string& path) {
    std::vector<DeliveredRow> rows;
    for (const auto& f : read_rows(path, "time_bucket_start_s,class,packets,bits")) {
        if (f.size() != 4) {
            throw std::runtime_error(path + ": malformed row");
        }
        rows.push_back(DeliveredRow{std::stod(f[0]), f[1], std::stoull(f[2]),
                                    std::stoull(f[3])});
    }
    return rows;
}

std::vector<DelayRow> read_delay_csv(const std::string& path) {
    std::vector<DelayRow> rows;
    for (const auto& f :
         read_rows(path, "delivery_time_s,class,packet_delay_s,running_mean_s")) {
        if (f.size() != 4) {
            throw std::runtime_error(path + ": malformed row");
        }
        rows.push_back(DelayRow{std::stod(f[0]), f[1], std::stod(f[2]), std::stod(f[3])});
    }
    return rows;
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::vector<SummaryRow> rows;
    for (const auto& f : read_rows(
             path,
             "scheduler,class,offered_pkts,delivered_pkts,dropped_pkts,mean_delay_s,p99_delay_s")) {
        if (f.size() != 7) {
            throw std::runtime_error(path + ": malformed row");
        }
        rows.push_back(SummaryRow{f[0], f[1], std::stoull(f[2]), std::stoull(f[3]),
                                  std::stoull(f[4]), std::stod(f[5]), std::stod(f[6])});
    }
    return rows;
}

void write_manifest(const std::string& path, const ScenarioConfig& cfg) {
    nlohmann::json j;
    j["version"] = kVersion;
    j["scenario"] = cfg.name;
    j["seed"] = cfg.run.seed;
    j["scheduler"] = cfg.scheduler.kind;
    j["config"] = nlohmann::json::parse(scenario_to_json(cfg));
    auto out = open_out(path);
    out << j.dump(2) << '\n';
}

} // namespace qsim
