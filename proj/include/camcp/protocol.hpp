#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "camcp/errors.hpp"
#include "camcp/plan_types.hpp"
#include "camcp/value.hpp"

namespace camcp {

struct ToolInfo {
    std::string name;
    std::string description;
    Value param_schema = Value::object();  // opaque, never validated

    friend bool operator==(const ToolInfo& a, const ToolInfo& b)
    {
        return a.name == b.name && a.description == b.description &&
               values_equal(a.param_schema, b.param_schema);
    }
};

// Step 2: a server declares its tools to the client.
struct ToolDeclaration {
    std::string server_id;
    std::vector<ToolInfo> tools;
    friend bool operator==(const ToolDeclaration&, const ToolDeclaration&) = default;
};

// Step 1: user query forwarded to the planner.
struct PlanRequest {
    Query query;
    friend bool operator==(const PlanRequest&, const PlanRequest&) = default;
};

// Steps 3-4: planner seeds the store.
struct ContextSeed {
    PlanBlueprint blueprint;
    friend bool operator==(const ContextSeed&, const ContextSeed&) = default;
};

// Steps 5-6: servers read and write the store.
struct ContextWrite {
    std::string key;
    Value value;
    friend bool operator==(const ContextWrite& a, const ContextWrite& b)
    {
        return a.key == b.key && values_equal(a.value, b.value);
    }
};

struct ContextRead {
    std::string key;
    friend bool operator==(const ContextRead&, const ContextRead&) = default;
};

// Step 7.
struct CompletionSignal {
    std::string completion_key;
    friend bool operator==(const CompletionSignal&, const CompletionSignal&) = default;
};

// Step 8: the final store state handed back for summarization.
struct SummaryRequest {
    Value snapshot = Value::object();
    friend bool operator==(const SummaryRequest& a, const SummaryRequest& b)
    {
        return values_equal(a.snapshot, b.snapshot);
    }
};

// Step 9.
struct FinalResponse {
    std::string text;
    friend bool operator==(const FinalResponse&, const FinalResponse&) = default;
};

using Message = std::variant<ToolDeclaration, PlanRequest, ContextSeed, ContextWrite, ContextRead,
                             CompletionSignal, SummaryRequest, FinalResponse>;

enum class MessageType {
    tool_declaration,
    plan_request,
    context_seed,
    context_write,
    context_read,
    completion_signal,
    summary_request,
    final_response,
};

std::string_view to_string(MessageType type);
MessageType message_type(const Message& message);

/// Position of a message type in the plan -> declare -> seed -> execute ->
/// complete -> summarize -> respond flow (1..9).
int step_rank(MessageType type);

class Envelope {
public:
    /// Throws std::invalid_argument if seq < 1 or the message carries
    /// something that is not a context value.
    Envelope(std::int64_t seq, Message message);

    std::int64_t seq() const noexcept { return seq_; }
    const Message& message() const noexcept { return message_; }
    MessageType type() const { return message_type(message_); }
    Value payload() const;

    friend bool operator==(const Envelope&, const Envelope&) = default;

private:
    std::int64_t seq_;
    Message message_;
};

class ProtocolError : public Error {
public:
    enum class Kind { malformed_syntax, unknown_msg_type, schema_violation, out_of_order };

    ProtocolError(Kind kind, std::string field, const std::string& what, std::size_t position = 0)
        : Error(what), kind_(kind), field_(std::move(field)), position_(position) {}

    Kind kind() const noexcept { return kind_; }
    /// Offending field for decode errors.
    const std::string& field() const noexcept { return field_; }
    /// 1-based index of the first out-of-order message.
    std::size_t position() const noexcept { return position_; }

private:
    Kind kind_;
    std::string field_;
    std::size_t position_;
};

/// One line, no newline: {"msg_type":..,"seq":..,"payload":{..}} with payload
/// keys sorted.
std::string encode(const Envelope& envelope);

/// Throws ProtocolError (malformed_syntax, unknown_msg_type or
/// schema_violation naming the payload field).
Envelope decode(std::string_view line);

/// Throws ProtocolError(out_of_order) at the first message whose step comes
/// before one already seen.
void validate_sequence(std::span<const Envelope> messages);

}  // namespace camcp
