#include "qsim/traffic.hpp"

#include <cmath>
#include <stdexcept>

namespace qsim {

const char* source_kind_name(SourceKind kind) {
    switch (kind) {
    case SourceKind::VoiceCbr:
        return "voice_cbr";
    case SourceKind::VideoFrames:
        return "video_frames";
    case SourceKind::DataOnOff:
        return "data_onoff";
    }
    return "voice_cbr";
}

std::optional<SourceKind> source_kind_from_name(const std::string& name) {
    if (name == "voice_cbr") {
        return SourceKind::VoiceCbr;
    }
    if (name == "video_frames") {
        return SourceKind::VideoFrames;
    }
    if (name == "data_onoff") {
        return SourceKind::DataOnOff;
    }
    return std::nullopt;
}

void SourceSpec::validate() const {
    if (name.empty()) {
        throw std::invalid_argument("SourceSpec: name required");
    }
    if (stop_s <= start_s || start_s < 0.0) {
        throw std::invalid_argument("SourceSpec: need 0 <= start < stop");
    }
    if (rate_bps == 0 || packet_bytes == 0) {
        throw std::invalid_argument("SourceSpec: rate and packet size must be positive");
    }
    if (kind == SourceKind::VideoFrames) {
        if (fps <= 0.0 || frame_bytes == 0 || mtu_bytes == 0) {
            throw std::invalid_argument("SourceSpec: video parameters must be positive");
        }
    }
    if (kind == SourceKind::DataOnOff) {
        if (on_mean_s <= 0.0 || off_mean_s <= 0.0) {
            throw std::invalid_argument("SourceSpec: on/off means must be positive");
        }
    }
}

double expected_mean_rate_bps(const SourceSpec& spec) {
    switch (spec.kind) {
    case SourceKind::VoiceCbr:
        return static_cast<double>(spec.rate_bps);
    case SourceKind::VideoFrames:
        return spec.fps * static_cast<double>(spec.frame_bytes) * 8.0;
    case SourceKind::DataOnOff:
        return static_cast<double>(spec.rate_bps) * spec.on_mean_s /
               (spec.on_mean_s + spec.off_mean_s);
    }
    return 0.0;
}

namespace {

std::uint8_t dscp_for(TrafficClassKind kind) {
    switch (kind) {
    case TrafficClassKind::Voice:
        return 46; // EF
    case TrafficClassKind::Video:
        return 34; // AF41
    case TrafficClassKind::Data:
        return 0;
    }
    return 0;
}

} // namespace

Source::Source(SourceSpec spec, RandomStream rng, std::uint64_t id_base,
               std::uint32_t flow_id)
    : spec_(std::move(spec)), rng_(rng), next_id_(id_base), flow_id_(flow_id) {
    spec_.validate();
    const SimTime start = SimTime::seconds(spec_.start_s);
    switch (spec_.kind) {
    case SourceKind::VoiceCbr:
        first_at_ = start;
        break;
    case SourceKind::VideoFrames:
        first_at_ = start;
        next_frame_at_ = start;
        break;
    case SourceKind::DataOnOff:
        on_until_ = start + SimTime::seconds(rng_.exponential(spec_.on_mean_s));
        first_at_ = next_data_arrival(start);
        break;
    }
}

Packet Source::make_packet(std::uint32_t size_bytes, SimTime now) {
    TrafficClass cls{spec_.cls};
    auto marking = Ipv6Marking::make(dscp_for(spec_.cls), flow_id_ & 0xFFFFFu,
                                     static_cast<std::uint8_t>(cls.precedence()));
    return Packet::make(next_id_++, flow_id_, static_cast<std::uint64_t>(size_bytes) * 8,
                        marking, cls, now);
}

// First Poisson arrival strictly after `after`, skipping off periods.
SimTime Source::next_data_arrival(SimTime after) {
    const double mean_gap =
        static_cast<double>(spec_.packet_bytes) * 8.0 / static_cast<double>(spec_.rate_bps);
    SimTime t = after + SimTime::seconds(rng_.exponential(mean_gap));
    while (t >= on_until_) {
        const SimTime next_on =
            on_until_ + SimTime::seconds(rng_.exponential(spec_.off_mean_s));
        on_until_ = next_on + SimTime::seconds(rng_.exponential(spec_.on_mean_s));
        t = next_on + SimTime::seconds(rng_.exponential(mean_gap));
    }
    return t;
}

Source::Emission Source::next_emission(SimTime now) {
    if (now < SimTime::seconds(spec_.start_s) || now >= SimTime::seconds(spec_.stop_s)) {
        throw std::logic_error("Source: emission outside [start, stop)");
    }

    std::uint32_t size_bytes = spec_.packet_bytes;
    SimTime next;

    switch (spec_.kind) {
    case SourceKind::VoiceCbr: {
        const double gap = static_cast<double>(spec_.packet_bytes) * 8.0 /
                           static_cast<double>(spec_.rate_bps);
        next = now + SimTime::seconds(gap);
        break;
    }
    case SourceKind::VideoFrames: {
        if (pending_frags_.empty()) {
            // New frame due now: fragment it at the MTU.
            std::uint32_t frame = spec_.frame_bytes;
            if (spec_.lognormal_frames) {
                const double mu =
                    std::log(static_cast<double>(spec_.frame_bytes)) -
                    spec_.frame_sigma * spec_.frame_sigma / 2.0;
                // Box-Muller, two unit draws per frame.
                const double u1 = std::max(rng_.next_unit(), 1e-12);
                const double u2 = rng_.next_unit();
                const double z =
                    std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
                frame = static_cast<std::uint32_t>(
                    std::max(1.0, std::round(std::exp(mu + spec_.frame_sigma * z))));
            }
            while (frame > 0) {
                const std::uint32_t piece = std::min(frame, spec_.mtu_bytes);
                pending_frags_.push_back(piece);
                frame -= piece;
            }
            next_frame_at_ = now + SimTime::seconds(1.0 / spec_.fps);
        }
        size_bytes = pending_frags_.front();
        pending_frags_.pop_front();
        next = pending_frags_.empty() ? next_frame_at_
                                      : now + SimTime::seconds(spec_.fragment_spacing_s);
        break;
    }
    case SourceKind::DataOnOff: {
        next = next_data_arrival(now);
        break;
    }
    }

    Emission out{make_packet(size_bytes, now), std::nullopt};
    if (next.sec() < spec_.stop_s) {
        out.next_time = next;
    }
    return out;
}

} // namespace qsim
