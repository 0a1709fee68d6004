#pragma once

#include <chrono>
#include <optional>
#include <span>
#include <string>

#include "camcp/planner.hpp"
#include "camcp/protocol.hpp"
#include "camcp/trace.hpp"

namespace camcp {

struct ChatMessage {
    std::string role;
    std::string text;
};

/// A seat for a real model. Implementations count each request on the
/// CallCounter they were given, the same way MockPlanner counts.
class LlmClient {
public:
    virtual ~LlmClient() = default;
    virtual std::string request(std::span<const ChatMessage> messages,
                                std::span<const ToolDeclaration> tools) = 0;
};

/// {"messages":[{"role":..,"text":..}],"tools":[<declaration payload>..]}
std::string build_request_body(std::span<const ChatMessage> messages,
                               std::span<const ToolDeclaration> tools);

/// Returns the text of the last message.
class EchoLlmClient final : public LlmClient {
public:
    explicit EchoLlmClient(CallCounter& counter) : counter_(counter) {}
    std::string request(std::span<const ChatMessage> messages,
                        std::span<const ToolDeclaration> tools) override;

private:
    CallCounter& counter_;
};

struct HttpLlmConfig {
    std::string url;  // http://host[:port][/path]
    std::string token;
    std::chrono::milliseconds timeout{60'000};

    /// Reads CA_MCP_LLM_URL and CA_MCP_LLM_TOKEN; nullopt if the URL is unset.
    static std::optional<HttpLlmConfig> from_environment();
};

/// POSTs the request body to the configured endpoint and returns the "text"
/// member of the JSON reply. Bodies are logged verbatim as llm_call events
/// when a recorder is attached.
///
/// Throws ConfigurationError (before any network activity) when no endpoint
/// is configured, TimeoutError, NetworkError, or HttpStatusError on a
/// non-2xx reply.
class HttpLlmClient final : public LlmClient {
public:
    HttpLlmClient(CallCounter& counter, std::optional<HttpLlmConfig> config,
                  TraceRecorder* trace = nullptr, CallRole role = CallRole::combined);

    std::string request(std::span<const ChatMessage> messages,
                        std::span<const ToolDeclaration> tools) override;

private:
    CallCounter& counter_;
    std::optional<HttpLlmConfig> config_;
    TraceRecorder* trace_;
    CallRole role_;
};

}  // namespace camcp
