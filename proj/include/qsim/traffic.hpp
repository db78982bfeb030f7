#ifndef QSIM_TRAFFIC_HPP
#define QSIM_TRAFFIC_HPP

#include <cstdint>
#include <deque>
#include <optional>
#include <string>

#include "qsim/packet.hpp"
#include "qsim/rng.hpp"
#include "qsim/time.hpp"

namespace qsim {

enum class SourceKind { VoiceCbr, VideoFrames, DataOnOff };

const char* source_kind_name(SourceKind kind);
std::optional<SourceKind> source_kind_from_name(const std::string& name);

// Declarative description of one traffic source. Rate parameters are
// interpreted per kind:
//   VoiceCbr    — fixed-size packets at rate_bps exactly.
//   VideoFrames — one frame per 1/fps, fragmented at the MTU and emitted
//                 back-to-back; frame sizes deterministic unless the
//                 lognormal option is set.
//   DataOnOff   — exponential on/off gating of a Poisson packet process
//                 that runs at rate_bps while on.
struct SourceSpec {
    std::string name;
    SourceKind kind = SourceKind::VoiceCbr;
    TrafficClassKind cls = TrafficClassKind::Data;
    std::string from;
    std::string to;
    double start_s = 0.0;
    double stop_s = 0.0;

    std::uint64_t rate_bps = 64000; // voice/data: emission rate (data: while on)
    std::uint32_t packet_bytes = 200;

    double fps = 10.0;
    std::uint32_t frame_bytes = 3750;
    std::uint32_t mtu_bytes = 1500;
    bool lognormal_frames = false;
    double frame_sigma = 0.3;

    double on_mean_s = 1.0;
    double off_mean_s = 2.0;

    // Spacing between the fragments of one frame. Keeps per-source
    // emission times strictly increasing while staying far below the
    // serialization time of any access link.
    double fragment_spacing_s = 1e-6;

    void validate() const;
};

// Expected long-run average bitrate of the source, accounting for the
// on/off duty cycle of data sources.
double expected_mean_rate_bps(const SourceSpec& spec);

// Stateful emitter for one source. Each call to next_emission produces the
// packet due at `now` and the time of the following emission (or nothing
// once the next one would fall at or beyond stop).
class Source {
public:
    Source(SourceSpec spec, RandomStream rng, std::uint64_t id_base,
           std::uint32_t flow_id);

    struct Emission {
        Packet packet;
        std::optional<SimTime> next_time;
    };

    // Time of the first emission, at or after start.
    SimTime first_emission_time() const { return first_at_; }

    Emission next_emission(SimTime now);

    const SourceSpec& spec() const { return spec_; }
    std::uint32_t flow_id() const { return flow_id_; }

private:
    Packet make_packet(std::uint32_t size_bytes, SimTime now);
    SimTime next_data_arrival(SimTime after);

    SourceSpec spec_;
    RandomStream rng_;
    std::uint64_t next_id_;
    std::uint32_t flow_id_;
    SimTime first_at_;

    // video state
    std::deque<std::uint32_t> pending_frags_;
    SimTime next_frame_at_;

    // data state
    SimTime on_until_;
};

} // namespace qsim

#endif // QSIM_TRAFFIC_HPP
