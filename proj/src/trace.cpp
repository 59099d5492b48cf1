#include "edocr/trace.hpp"

#include <cstdio>

namespace edocr {

const char* event_kind_name(EventKind kind) {
    switch (kind) {
        case EventKind::Deploy: return "DEPLOY";
        case EventKind::Elect: return "ELECT";
        case EventKind::TrafficGen: return "TRAFFIC";
        case EventKind::Rreq: return "RREQ";
        case EventKind::Rrep: return "RREP";
        case EventKind::Fwd: return "FWD";
        case EventKind::Drop: return "DROP";
        case EventKind::NodeDeath: return "DEATH";
        case EventKind::Partition: return "PARTITION";
    }
    return "?";
}

std::string format_trace_event(const TraceEvent& ev) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", ev.energy);
    std::string line = std::to_string(ev.tick);
    line += '\t';
    line += event_kind_name(ev.kind);
    line += '\t';
    line += "energy=";
    line += buf;
    for (const auto& [key, value] : ev.fields) {
        line += '\t';
        line += key;
        line += '=';
        line += value;
    }
    return line;
}

}  // namespace edocr
