#include "qsim/marking.hpp"

#include <stdexcept>

namespace qsim {

Ipv6Marking Ipv6Marking::make(std::uint8_t dscp, std::uint32_t flow_label,
                              std::uint8_t legacy_priority) {
    if (dscp > 63) {
        throw std::invalid_argument("Ipv6Marking: dscp exceeds 6 bits");
    }
    if (flow_label > 0xFFFFFu) {
        throw std::invalid_argument("Ipv6Marking: flow label exceeds 20 bits");
    }
    if (legacy_priority > 15) {
        throw std::invalid_argument("Ipv6Marking: priority exceeds 4 bits");
    }
    return Ipv6Marking{dscp, flow_label, legacy_priority};
}

FlowLabelStatus flow_label_status(std::int64_t label) {
    if (label == 0) {
        return FlowLabelStatus::NoFlow;
    }
    if (label >= 0x00001 && label <= 0xFFFFF) {
        return FlowLabelStatus::ValidFlow;
    }
    return FlowLabelStatus::OutOfRange;
}

DscpPool dscp_pool(int dscp) {
    if (dscp < 0 || dscp > 63) {
        throw std::invalid_argument("dscp_pool: codepoint outside 0..63");
    }
    if ((dscp & 0x1) == 0) {
        return DscpPool::Pool1Standard;
    }
    if ((dscp & 0x3) == 0x3) {
        return DscpPool::Pool2ExpLocal;
    }
    return DscpPool::Pool3ExpLocalOverflow;
}

LegacyPrioritySemantics legacy_priority_semantics(int p) {
    if (p < 0 || p > 15) {
        throw std::invalid_argument("legacy_priority_semantics: value outside 0..15");
    }
    return p <= 7 ? LegacyPrioritySemantics::CongestionControlled
                  : LegacyPrioritySemantics::RealTimeDropPriority;
}

RouterAlertKind router_alert_kind(std::uint16_t value) {
    switch (value) {
    case 0:
        return RouterAlertKind::MulticastListenerDiscovery;
    case 1:
        return RouterAlertKind::Rsvp;
    case 2:
        return RouterAlertKind::ActiveNetwork;
    default:
        return RouterAlertKind::Reserved;
    }
}

} // namespace qsim
