#include "qsim/packet.hpp"

#include <stdexcept>

namespace qsim {

const char* traffic_class_name(TrafficClassKind kind) {
    switch (kind) {
    case TrafficClassKind::Voice:
        return "voice";
    case TrafficClassKind::Video:
        return "video";
    case TrafficClassKind::Data:
        return "data";
    }
    return "data";
}

std::optional<TrafficClassKind> traffic_class_from_name(const std::string& name) {
    if (name == "voice") {
        return TrafficClassKind::Voice;
    }
    if (name == "video") {
        return TrafficClassKind::Video;
    }
    if (name == "data") {
        return TrafficClassKind::Data;
    }
    return std::nullopt;
}

Packet Packet::make(std::uint64_t id, std::uint32_t flow_id, std::uint64_t size_bits,
                    Ipv6Marking marking, TrafficClass cls, SimTime created_at) {
    if (size_bits == 0) {
        throw std::invalid_argument("Packet: size_bits must be positive");
    }
    Packet p;
    p.id = id;
    p.flow_id = flow_id;
    p.size_bits = size_bits;
    p.marking = marking;
    p.cls = cls;
    p.created_at = created_at;
    return p;
}

void Packet::mark_delivered(SimTime at) {
    if (at < created_at) {
        throw std::invalid_argument("Packet: delivery precedes creation");
    }
    delivered_at = at;
}

SimTime transmission_time(std::uint64_t size_bits, std::uint64_t link_rate_bps) {
    if (size_bits == 0) {
        throw std::invalid_argument("transmission_time: size_bits must be positive");
    }
    if (link_rate_bps == 0) {
        throw std::invalid_argument("transmission_time: link rate must be positive");
    }
    return SimTime::seconds(static_cast<double>(size_bits) /
                            static_cast<double>(link_rate_bps));
}

} // namespace qsim
