#ifndef QSIM_CSV_HPP
#define QSIM_CSV_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qsim/metrics.hpp"
#include "qsim/scenario.hpp"

namespace qsim {

inline constexpr const char* kVersion = "0.1.0";

// Numbers are serialized with 9 significant digits, '.' decimal separator
// and LF line endings so identical runs produce byte-identical files.
std::string format_sig9(double v);

struct DropsRow {
    double time_bucket_start_s = 0.0;
    std::string site;
    std::string reason;
    std::uint64_t count = 0;

    friend bool operator==(const DropsRow&, const DropsRow&) = default;
};

struct DeliveredRow {
    double time_bucket_start_s = 0.0;
    std::string cls;
    std::uint64_t packets = 0;
    std::uint64_t bits = 0;

    friend bool operator==(const DeliveredRow&, const DeliveredRow&) = default;
};

struct DelayRow {
    double delivery_time_s = 0.0;
    std::string cls;
    double packet_delay_s = 0.0;
    double running_mean_s = 0.0;

    friend bool operator==(const DelayRow&, const DelayRow&) = default;
};

struct SummaryRow {
    std::string scheduler;
    std::string cls;
    std::uint64_t offered_pkts = 0;
    std::uint64_t delivered_pkts = 0;
    std::uint64_t dropped_pkts = 0;
    double mean_delay_s = 0.0;
    double p99_delay_s = 0.0;

    friend bool operator==(const SummaryRow&, const SummaryRow&) = default;
};

std::vector<DropsRow> drops_rows(const DropSeries& series);
std::vector<DeliveredRow> delivered_rows(const std::vector<PacketRecord>& records,
                                         double bucket_s);
std::vector<DelayRow> delay_rows(const std::vector<PacketRecord>& records);
std::vector<SummaryRow> summary_rows(const std::vector<PacketRecord>& records,
                                     const std::string& scheduler);

void write_drops_csv(const std::string& path, const std::vector<DropsRow>& rows);
void write_delivered_csv(const std::string& path, const std::vector<DeliveredRow>& rows);
void write_delay_csv(const std::string& path, const std::vector<DelayRow>& rows);
void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows);

std::vector<DropsRow> read_drops_csv(const std::string& path);
std::vector<DeliveredRow> read_delivered_csv(const std::string& path);
std::vector<DelayRow> read_delay_csv(const std::string& path);
std::vector<SummaryRow> read_summary_csv(const std::string& path);

// Config echo + seed + version; stable bytes for identical configs.
void write_manifest(const std::string& path, const ScenarioConfig& cfg);

} // namespace qsim

#endif // QSIM_CSV_HPP
