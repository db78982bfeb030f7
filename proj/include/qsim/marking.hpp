#ifndef QSIM_MARKING_HPP
#define QSIM_MARKING_HPP

#include <cstdint>

namespace qsim {

// IPv6-style QoS markings carried by every packet: the 6-bit DS codepoint,
// the 20-bit flow label and the 1996-era 4-bit priority field.
struct Ipv6Marking {
    std::uint8_t dscp = 0;            // 0..63
    std::uint32_t flow_label = 0;     // 0..0xFFFFF
    std::uint8_t legacy_priority = 0; // 0..15

    static Ipv6Marking make(std::uint8_t dscp, std::uint32_t flow_label,
                            std::uint8_t legacy_priority);
};

enum class FlowLabelStatus { NoFlow, ValidFlow, OutOfRange };

// Zero means "no flow", 0x00001..0xFFFFF identify flows, anything else
// (including negatives) does not fit the 20-bit field. Total over all ints.
FlowLabelStatus flow_label_status(std::int64_t label);

enum class DscpPool { Pool1Standard, Pool2ExpLocal, Pool3ExpLocalOverflow };

// Pool membership by codepoint low bits: xxxxx0 standard (32 values),
// xxxx11 experimental/local (16), xxxx01 experimental/local overflow (16).
DscpPool dscp_pool(int dscp);

enum class LegacyPrioritySemantics { CongestionControlled, RealTimeDropPriority };

// 0..7 congestion-controlled fixed priorities, 8..15 real-time drop priorities.
LegacyPrioritySemantics legacy_priority_semantics(int p);

// Hop-by-hop router-alert values.
enum class RouterAlertKind { MulticastListenerDiscovery, Rsvp, ActiveNetwork, Reserved };

RouterAlertKind router_alert_kind(std::uint16_t value);

} // namespace qsim

#endif // QSIM_MARKING_HPP
