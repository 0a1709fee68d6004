#include "camcp/trace.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "camcp/errors.hpp"

namespace camcp {

namespace {

constexpr std::array<std::string_view, 9> kEventNames = {
    "run_start", "llm_call", "tool_exec", "scs_write", "trigger_fire",
    "stage_done", "stage_failed", "message", "run_end",
};

}  // namespace

std::string_view to_string(EventKind kind)
{
    return kEventNames[static_cast<std::size_t>(kind)];
}

EventKind parse_event_kind(std::string_view text)
{
    auto it = std::find(kEventNames.begin(), kEventNames.end(), text);
    if (it == kEventNames.end())
        throw std::invalid_argument("unknown event kind: " + std::string(text));
    return static_cast<EventKind>(it - kEventNames.begin());
}

std::string_view to_string(RunMode mode)
{
    return mode == RunMode::traditional ? "traditional" : "context_aware";
}

RunMode parse_run_mode(std::string_view text)
{
    if (text == "traditional")
        return RunMode::traditional;
    if (text == "context_aware" || text == "ca")
        return RunMode::context_aware;
    throw std::invalid_argument("unknown run mode: " + std::string(text));
}

std::string encode_event(const TraceEvent& event)
{
    std::string line = "{\"t\":";
    line += std::to_string(event.logical_time);
    line += ",\"kind\":\"";
    line += to_string(event.kind);
    line += "\",\"payload\":";
    line += canonical(event.payload);
    line += '}';
    return line;
}

std::string Trace::serialize() const
{
    std::string out;
    for (const auto& e : events) {
        out += encode_event(e);
        out += '\n';
    }
    return out;
}

void Trace::write(std::ostream& out) const
{
    out << serialize();
}

Trace Trace::parse(std::istream& in)
{
    Trace trace;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        Value v;
        try {
            v = parse_value(line);
        } catch (const std::exception& e) {
            throw MalformedTrace(line_no, e.what());
        }
        if (!v.is_object() || v.size() != 3 || !v.contains("t") || !v.contains("kind") ||
            !v.contains("payload"))
            throw MalformedTrace(line_no, "expected {t, kind, payload}");
        if (!v["t"].is_number_integer() || !v["kind"].is_string() || !v["payload"].is_object())
            throw MalformedTrace(line_no, "ill-typed event field");
        TraceEvent event;
        event.logical_time = v["t"].get<std::int64_t>();
        try {
            event.kind = parse_event_kind(v["kind"].get<std::string>());
        } catch (const std::invalid_argument& e) {
            throw MalformedTrace(line_no, e.what());
        }
        event.payload = std::move(v["payload"]);
        try {
            if (event.kind == EventKind::run_start) {
                trace.mode = parse_run_mode(event.payload.at("mode").get<std::string>());
                trace.seed = event.payload.at("seed").get<std::uint64_t>();
            } else if (event.kind == EventKind::run_end) {
                trace.simulated_latency_s = event.payload.at("simulated_latency_s").get<double>();
            }
        } catch (const std::exception& e) {
            throw MalformedTrace(line_no, std::string("bad run header: ") + e.what());
        }
        trace.events.push_back(std::move(event));
    }
    if (trace.events.empty())
        throw MalformedTrace(line_no, "empty trace");
    if (trace.events.back().kind != EventKind::run_end)
        throw MalformedTrace(line_no, "trace truncated: last event is not run_end");
    trace.validate();
    return trace;
}

Trace Trace::parse(std::string_view text)
{
    std::istringstream in{std::string(text)};
    return parse(in);
}

void Trace::validate() const
{
    if (events.empty())
        throw MalformedTrace(0, "empty trace");
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& e = events[i];
        const bool first = i == 0;
        const bool last = i + 1 == events.size();
        if (first != (e.kind == EventKind::run_start))
            throw MalformedTrace(i + 1, "run_start must be exactly the first event");
        if (last != (e.kind == EventKind::run_end))
            throw MalformedTrace(i + 1, "run_end must be exactly the last event");
        if (i > 0 && e.logical_time <= events[i - 1].logical_time)
            throw MalformedTrace(i + 1, "logical time not strictly increasing");
    }
}

std::vector<Envelope> Trace::protocol_messages() const
{
    std::vector<Envelope> out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (events[i].kind != EventKind::message)
            continue;
        try {
            out.push_back(decode(events[i].payload.at("wire").get<std::string>()));
        } catch (const std::exception& e) {
            throw MalformedTrace(i + 1, std::string("bad message event: ") + e.what());
        }
    }
    return out;
}

std::size_t Trace::count(EventKind kind) const
{
    return static_cast<std::size_t>(std::count_if(
        events.begin(), events.end(), [kind](const TraceEvent& e) { return e.kind == kind; }));
}

std::int64_t TraceRecorder::record(EventKind kind, Value payload)
{
    std::lock_guard lock(mutex_);
    const std::int64_t t = static_cast<std::int64_t>(events_.size()) + 1;
    events_.push_back(TraceEvent{t, kind, std::move(payload)});
    return t;
}

Envelope TraceRecorder::message(const std::string& sender, Message message)
{
    std::lock_guard lock(mutex_);
    Envelope envelope(++seq_[sender], std::move(message));
    const std::int64_t t = static_cast<std::int64_t>(events_.size()) + 1;
    events_.push_back(
        TraceEvent{t, EventKind::message, Value{{"from", sender}, {"wire", encode(envelope)}}});
    return envelope;
}

std::vector<TraceEvent> TraceRecorder::events() const
{
    std::lock_guard lock(mutex_);
    return events_;
}

}  // namespace camcp
