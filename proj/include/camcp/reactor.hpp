#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "camcp/condition.hpp"
#include "camcp/protocol.hpp"
#include "camcp/store.hpp"
#include "camcp/trace.hpp"

namespace camcp {

/// What a reactor publishes after one fire. On success the last write is
/// (done_key, true); on failure there are no writes.
struct ActionResult {
    std::vector<Write> writes;
    std::optional<std::string> failure;

    static ActionResult success(std::vector<Write> outputs, const std::string& done_key);
    static ActionResult failed(std::string reason);

    bool ok() const { return !failure.has_value(); }
};

using Action = std::function<ActionResult(const Snapshot&)>;

struct ServerSpec {
    std::string server_id;
    std::vector<ToolInfo> tools;
    Condition trigger;
    Action action;
    std::string done_key;
    /// Stage this server implements; defaults to server_id.
    std::string stage_id;

    ToolDeclaration declaration() const { return {server_id, tools}; }
};

/// idle -> ready -> fired | failed. A new rising edge re-arms a reactor.
enum class ReactorState { idle, ready, fired, failed };

std::string_view to_string(ReactorState state);

/// Turns server specs into reactors over a store.
///
/// The engine is the store's notification consumer: in deterministic mode it
/// drains the store's global list, in concurrent mode it reads each server's
/// own queue. Notifications for subscriptions it did not create are dropped.
class ReactorEngine {
public:
    explicit ReactorEngine(ContextStore& store, TraceRecorder* trace = nullptr);

    /// Throws DuplicateIdError on a repeated server_id or done_key.
    void register_server(ServerSpec spec);

    /// Fires every ready reactor once, in registration order, each on a
    /// fresh snapshot with an atomic commit. Returns the fired server ids.
    std::vector<std::string> step();

    /// Same contract as step() but ready reactors fire concurrently. The
    /// returned ids are in registration order; commit order is unspecified.
    std::vector<std::string> step_parallel();

    /// Steps until no reactor is ready and returns the number of steps.
    /// Throws BudgetExceeded if still active after max_steps.
    int run_until_quiescent(int max_steps, bool parallel = false);

    bool has_ready();
    ReactorState state(std::string_view server_id) const;
    std::optional<std::string> failure(std::string_view server_id) const;
    /// Fire order over the engine's lifetime.
    std::vector<std::string> fire_log() const;
    std::vector<ToolDeclaration> declarations() const;
    std::size_t size() const { return reactors_.size(); }

private:
    struct Reactor {
        ServerSpec spec;
        SubscriptionId subscription = 0;
        ReactorState state = ReactorState::idle;
        std::optional<std::string> failure;
    };

    void absorb_notifications();
    std::vector<std::size_t> ready_indices() const;
    void fire(Reactor& reactor, int step_number);
    const Reactor& find(std::string_view server_id) const;

    ContextStore& store_;
    TraceRecorder* trace_;
    std::vector<Reactor> reactors_;
    std::map<SubscriptionId, std::size_t> by_subscription_;
    int steps_ = 0;
    mutable std::mutex log_mutex_;
    std::vector<std::string> fire_log_;
};

}  // namespace camcp
