#ifndef QSIM_PACKET_HPP
#define QSIM_PACKET_HPP

#include <cstdint>
#include <optional>
#include <string>

#include "qsim/marking.hpp"
#include "qsim/time.hpp"

namespace qsim {

enum class TrafficClassKind { Voice, Video, Data };

// Class -> precedence mapping is fixed per run: voice outranks video
// outranks data in every precedence-aware scheduler.
struct TrafficClass {
    TrafficClassKind kind = TrafficClassKind::Data;

    int precedence() const {
        switch (kind) {
        case TrafficClassKind::Voice:
            return 5;
        case TrafficClassKind::Video:
            return 4;
        case TrafficClassKind::Data:
            return 0;
        }
        return 0;
    }
};

const char* traffic_class_name(TrafficClassKind kind);
std::optional<TrafficClassKind> traffic_class_from_name(const std::string& name);

struct Packet {
    std::uint64_t id = 0;
    std::uint32_t flow_id = 0;
    std::uint64_t size_bits = 0; // full on-wire size
    Ipv6Marking marking;
    TrafficClass cls;
    SimTime created_at;
    std::optional<SimTime> delivered_at;

    static Packet make(std::uint64_t id, std::uint32_t flow_id, std::uint64_t size_bits,
                       Ipv6Marking marking, TrafficClass cls, SimTime created_at);

    // Stamps the delivery time; never earlier than creation.
    void mark_delivered(SimTime at);
};

// Serialization delay of a packet on a link, exactly size/rate seconds.
SimTime transmission_time(std::uint64_t size_bits, std::uint64_t link_rate_bps);

} // namespace qsim

#endif // QSIM_PACKET_HPP
