#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace edocr {

enum class EventKind {
    Deploy,
    Elect,
    TrafficGen,
    Rreq,
    Rrep,
    Fwd,
    Drop,
    NodeDeath,
    Partition,
};

const char* event_kind_name(EventKind kind);

/// One structured simulation event. `energy` is the total joules drawn from
/// node batteries by this event; the per-run energy ledger is the sum of
/// these fields over the whole trace.
struct TraceEvent {
    std::int64_t tick = 0;
    std::uint64_t seq = 0;
    EventKind kind = EventKind::Deploy;
    double energy = 0.0;
    std::vector<std::pair<std::string, std::string>> fields;
};

class Trace {
public:
    /// Returns the event index; later emits may reallocate, so hold the
    /// index rather than a reference.
    std::size_t emit(std::int64_t tick, EventKind kind) {
        TraceEvent ev;
        ev.tick = tick;
        ev.seq = next_seq_++;
        ev.kind = kind;
        events_.push_back(std::move(ev));
        return events_.size() - 1;
    }

    TraceEvent& at(std::size_t index) { return events_[index]; }

    const std::vector<TraceEvent>& events() const { return events_; }
    std::vector<TraceEvent> take() { return std::move(events_); }

private:
    std::vector<TraceEvent> events_;
    std::uint64_t next_seq_ = 0;
};

/// Tab-separated single-line rendering: tick, kind, energy, then key=value pairs.
std::string format_trace_event(const TraceEvent& ev);

}  // namespace edocr
