#include "camcp/protocol.hpp"

#include <array>
#include <stdexcept>

namespace camcp {

namespace {

constexpr std::array<std::string_view, 8> kTypeNames = {
    "tool_declaration", "plan_request",      "context_seed",    "context_write",
    "context_read",     "completion_signal", "summary_request", "final_response",
};

Value tool_to_value(const ToolInfo& tool)
{
    return Value{{"name", tool.name},
                 {"description", tool.description},
                 {"param_schema", tool.param_schema}};
}

struct PayloadWriter {
    Value operator()(const ToolDeclaration& m) const
    {
        Value tools = Value::array();
        for (const auto& t : m.tools)
            tools.push_back(tool_to_value(t));
        return Value{{"server_id", m.server_id}, {"tools", std::move(tools)}};
    }
    Value operator()(const PlanRequest& m) const { return Value{{"query", m.query.to_value()}}; }
    Value operator()(const ContextSeed& m) const { return Value{{"blueprint", m.blueprint.to_value()}}; }
    Value operator()(const ContextWrite& m) const { return Value{{"key", m.key}, {"value", m.value}}; }
    Value operator()(const ContextRead& m) const { return Value{{"key", m.key}}; }
    Value operator()(const CompletionSignal& m) const
    {
        return Value{{"completion_key", m.completion_key}};
    }
    Value operator()(const SummaryRequest& m) const { return Value{{"snapshot", m.snapshot}}; }
    Value operator()(const FinalResponse& m) const { return Value{{"text", m.text}}; }
};

Message read_payload(MessageType type, const Value& p)
{
    using namespace detail;
    const std::string root;
    switch (type) {
    case MessageType::tool_declaration: {
        reject_unknown(p, {"server_id", "tools"}, root);
        ToolDeclaration m;
        m.server_id = require_text(p, "server_id", root);
        const Value& tools = require_list(p, "tools", root);
        for (std::size_t i = 0; i < tools.size(); ++i) {
            const std::string at = "tools[" + std::to_string(i) + "]";
            if (!tools[i].is_object())
                throw SchemaError(at, "expected a map");
            reject_unknown(tools[i], {"name", "description", "param_schema"}, at);
            ToolInfo t;
            t.name = require_text(tools[i], "name", at);
            t.description = require_text(tools[i], "description", at);
            t.param_schema = require_object(tools[i], "param_schema", at);
            m.tools.push_back(std::move(t));
        }
        return m;
    }
    case MessageType::plan_request:
        reject_unknown(p, {"query"}, root);
        return PlanRequest{Query::from_value(require(p, "query", root), "query")};
    case MessageType::context_seed:
        reject_unknown(p, {"blueprint"}, root);
        return ContextSeed{PlanBlueprint::from_value(require(p, "blueprint", root), "blueprint")};
    case MessageType::context_write:
        reject_unknown(p, {"key", "value"}, root);
        return ContextWrite{require_text(p, "key", root), require(p, "value", root)};
    case MessageType::context_read:
        reject_unknown(p, {"key"}, root);
        return ContextRead{require_text(p, "key", root)};
    case MessageType::completion_signal:
        reject_unknown(p, {"completion_key"}, root);
        return CompletionSignal{require_text(p, "completion_key", root)};
    case MessageType::summary_request:
        reject_unknown(p, {"snapshot"}, root);
        return SummaryRequest{require_object(p, "snapshot", root)};
    case MessageType::final_response:
        reject_unknown(p, {"text"}, root);
        return FinalResponse{require_text(p, "text", root)};
    }
    throw std::logic_error("unreachable message type");
}

}  // namespace

std::string_view to_string(MessageType type)
{
    return kTypeNames[static_cast<std::size_t>(type)];
}

MessageType message_type(const Message& message)
{
    return static_cast<MessageType>(message.index());
}

int step_rank(MessageType type)
{
    switch (type) {
    case MessageType::plan_request:
        return 1;
    case MessageType::tool_declaration:
        return 2;
    case MessageType::context_seed:
        return 3;
    case MessageType::context_write:
    case MessageType::context_read:
        return 5;
    case MessageType::completion_signal:
        return 7;
    case MessageType::summary_request:
        return 8;
    case MessageType::final_response:
        return 9;
    }
    return 0;
}

Envelope::Envelope(std::int64_t seq, Message message) : seq_(seq), message_(std::move(message))
{
    if (seq_ < 1)
        throw std::invalid_argument("envelope seq must be >= 1");
    if (!is_context_value(payload()))
        throw std::invalid_argument("envelope payload is not a context value");
}

Value Envelope::payload() const
{
    return std::visit(PayloadWriter{}, message_);
}

std::string encode(const Envelope& envelope)
{
    std::string line = "{\"msg_type\":";
    line += Value(std::string(to_string(envelope.type()))).dump();
    line += ",\"seq\":";
    line += std::to_string(envelope.seq());
    line += ",\"payload\":";
    line += canonical(envelope.payload());
    line += '}';
    return line;
}

Envelope decode(std::string_view line)
{
    using Kind = ProtocolError::Kind;
    Value v;
    try {
        v = parse_value(line);
    } catch (const std::exception& e) {
        throw ProtocolError(Kind::malformed_syntax, "", std::string("malformed line: ") + e.what());
    }
    if (!v.is_object())
        throw ProtocolError(Kind::malformed_syntax, "", "envelope must be a JSON object");
    if (!v.contains("msg_type") || !v["msg_type"].is_string())
        throw ProtocolError(Kind::schema_violation, "msg_type", "missing or ill-typed msg_type");

    const auto& name = v["msg_type"].get_ref<const std::string&>();
    std::size_t index = 0;
    while (index < kTypeNames.size() && kTypeNames[index] != name)
        ++index;
    if (index == kTypeNames.size())
        throw ProtocolError(Kind::unknown_msg_type, "msg_type", "unknown msg_type: " + name);
    const auto type = static_cast<MessageType>(index);

    for (const auto& [field, _] : v.items()) {
        if (field != "msg_type" && field != "seq" && field != "payload")
            throw ProtocolError(Kind::schema_violation, field, "unexpected envelope field " + field);
    }
    if (!v.contains("seq") || !v["seq"].is_number_integer() || v["seq"].get<std::int64_t>() < 1)
        throw ProtocolError(Kind::schema_violation, "seq", "seq must be an integer >= 1");
    if (!v.contains("payload") || !v["payload"].is_object())
        throw ProtocolError(Kind::schema_violation, "payload", "payload must be an object");

    try {
        return Envelope(v["seq"].get<std::int64_t>(), read_payload(type, v["payload"]));
    } catch (const SchemaError& e) {
        throw ProtocolError(Kind::schema_violation, e.field(), e.what());
    } catch (const std::invalid_argument& e) {
        throw ProtocolError(Kind::schema_violation, "payload", e.what());
    }
}

void validate_sequence(std::span<const Envelope> messages)
{
    int highest = 0;
    MessageType highest_type = MessageType::plan_request;
    for (std::size_t i = 0; i < messages.size(); ++i) {
        const MessageType type = messages[i].type();
        const int rank = step_rank(type);
        if (rank < highest) {
            throw ProtocolError(ProtocolError::Kind::out_of_order, "",
                                "message " + std::to_string(i + 1) + " (" +
                                    std::string(to_string(type)) + ") arrives after " +
                                    std::string(to_string(highest_type)),
                                i + 1);
        }
        if (rank > highest) {
            highest = rank;
            highest_type = type;
        }
    }
}

}  // namespace camcp
