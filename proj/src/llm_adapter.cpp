#include "camcp/llm_adapter.hpp"

#include <cstdlib>

#include "camcp/errors.hpp"
#include "httplib.h"

namespace camcp {

std::string build_request_body(std::span<const ChatMessage> messages,
                               std::span<const ToolDeclaration> tools)
{
    Value msg_list = Value::array();
    for (const auto& m : messages)
        msg_list.push_back(Value{{"role", m.role}, {"text", m.text}});
    Value tool_list = Value::array();
    for (const auto& t : tools)
        tool_list.push_back(Envelope(1, t).payload());
    return canonical(Value{{"messages", std::move(msg_list)}, {"tools", std::move(tool_list)}});
}

std::string EchoLlmClient::request(std::span<const ChatMessage> messages,
                                   std::span<const ToolDeclaration>)
{
    counter_.record(CallRole::combined);
    return messages.empty() ? std::string() : messages.back().text;
}

std::optional<HttpLlmConfig> HttpLlmConfig::from_environment()
{
    const char* url = std::getenv("CA_MCP_LLM_URL");
    if (!url || !*url)
        return std::nullopt;
    const char* token = std::getenv("CA_MCP_LLM_TOKEN");
    return HttpLlmConfig{url, token ? token : "", std::chrono::milliseconds{60'000}};
}

HttpLlmClient::HttpLlmClient(CallCounter& counter, std::optional<HttpLlmConfig> config,
                             TraceRecorder* trace, CallRole role)
    : counter_(counter), config_(std::move(config)), trace_(trace), role_(role)
{
}

namespace {

struct Endpoint {
    std::string origin;  // scheme://host:port
    std::string path;
};

Endpoint split_url(const std::string& url)
{
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw ConfigurationError("LLM endpoint URL must include a scheme: " + url);
    if (url.compare(0, scheme_end, "http") != 0)
        throw ConfigurationError("only http:// endpoints are supported: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    if (path_start == std::string::npos)
        return {url, "/"};
    return {url.substr(0, path_start), url.substr(path_start)};
}

}  // namespace

std::string HttpLlmClient::request(std::span<const ChatMessage> messages,
                                   std::span<const ToolDeclaration> tools)
{
    if (!config_ || config_->url.empty())
        throw ConfigurationError("LLM adapter is not configured: set CA_MCP_LLM_URL");
    const Endpoint endpoint = split_url(config_->url);
    const std::string body = build_request_body(messages, tools);

    httplib::Client client(endpoint.origin);
    const auto timeout = std::chrono::duration_cast<std::chrono::microseconds>(config_->timeout);
    const auto secs = static_cast<time_t>(timeout.count() / 1'000'000);
    const auto usecs = static_cast<time_t>(timeout.count() % 1'000'000);
    client.set_connection_timeout(secs, usecs);
    client.set_read_timeout(secs, usecs);
    client.set_write_timeout(secs, usecs);

    httplib::Headers headers;
    if (!config_->token.empty())
        headers.emplace("Authorization", "Bearer " + config_->token);

    const CallRecord call = counter_.record(role_);
    const auto started = std::chrono::steady_clock::now();
    auto result = client.Post(endpoint.path, headers, body, "application/json");
    if (!result) {
        const auto elapsed = std::chrono::steady_clock::now() - started;
        const auto err = result.error();
        if (err == httplib::Error::ConnectionTimeout || elapsed >= config_->timeout)
            throw TimeoutError("LLM request timed out after " +
                               std::to_string(config_->timeout.count()) + " ms");
        throw NetworkError("LLM request failed: " + httplib::to_string(err));
    }
    if (result->status < 200 || result->status >= 300)
        throw HttpStatusError(result->status, result->body);

    if (trace_) {
        trace_->record(EventKind::llm_call, Value{{"index", call.call_index},
                                                  {"role", std::string(to_string(call.role))},
                                                  {"latency_s", call.simulated_latency_s},
                                                  {"request_body", body},
                                                  {"response_body", result->body}});
    }
    Value reply;
    try {
        reply = parse_value(result->body);
    } catch (const std::exception& e) {
        throw NetworkError(std::string("LLM reply is not JSON: ") + e.what());
    }
    if (!reply.is_object() || !reply.contains("text") || !reply["text"].is_string())
        throw NetworkError("LLM reply lacks a text field");
    return reply["text"].get<std::string>();
}

}  // namespace camcp
