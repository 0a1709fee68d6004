#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/protocol.hpp"
#include "camcp/value.hpp"

namespace camcp {

enum class EventKind {
    run_start,
    llm_call,
    tool_exec,
    scs_write,
    trigger_fire,
    stage_done,
    stage_failed,
    message,
    run_end,
};

std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

enum class RunMode { traditional, context_aware };

std::string_view to_string(RunMode mode);
RunMode parse_run_mode(std::string_view text);

struct TraceEvent {
    std::int64_t logical_time = 0;
    EventKind kind = EventKind::run_start;
    Value payload = Value::object();

    friend bool operator==(const TraceEvent& a, const TraceEvent& b)
    {
        return a.logical_time == b.logical_time && a.kind == b.kind &&
               values_equal(a.payload, b.payload);
    }
};

/// Totally ordered event log of one run. Mode and seed live in the
/// run_start payload and the simulated latency in run_end, so the JSON-lines
/// form is self-contained.
struct Trace {
    std::vector<TraceEvent> events;
    RunMode mode = RunMode::context_aware;
    std::uint64_t seed = 0;
    double simulated_latency_s = 0.0;

    /// One {"t":..,"kind":..,"payload":{..}} line per event.
    std::string serialize() const;
    void write(std::ostream& out) const;

    /// Throws MalformedTrace naming the line.
    static Trace parse(std::istream& in);
    static Trace parse(std::string_view text);

    /// Throws MalformedTrace unless times strictly increase and the log is
    /// bracketed by exactly one run_start and one run_end.
    void validate() const;

    /// Protocol envelopes carried by `message` events, in trace order.
    std::vector<Envelope> protocol_messages() const;

    std::size_t count(EventKind kind) const;
};

std::string encode_event(const TraceEvent& event);

/// Thread-safe trace builder. Assigns logical times 1, 2, ... and per-sender
/// envelope sequence numbers.
class TraceRecorder {
public:
    std::int64_t record(EventKind kind, Value payload);

    /// Wraps `message` in an envelope from `sender`, logs it as a `message`
    /// event and returns it.
    Envelope message(const std::string& sender, Message message);

    std::vector<TraceEvent> events() const;

private:
    mutable std::mutex mutex_;
    std::vector<TraceEvent> events_;
    std::map<std::string, std::int64_t, std::less<>> seq_;
};

}  // namespace camcp
