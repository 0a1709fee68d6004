#include "camcp/reactor.hpp"

#include <stdexcept>

#include "camcp/errors.hpp"

namespace camcp {

ActionResult ActionResult::success(std::vector<Write> outputs, const std::string& done_key)
{
    outputs.push_back(Write{done_key, true});
    return ActionResult{std::move(outputs), std::nullopt};
}

ActionResult ActionResult::failed(std::string reason)
{
    return ActionResult{{}, std::move(reason)};
}

std::string_view to_string(ReactorState state)
{
    switch (state) {
    case ReactorState::idle:
        return "idle";
    case ReactorState::ready:
        return "ready";
    case ReactorState::fired:
        return "fired";
    case ReactorState::failed:
        return "failed";
    }
    return "idle";
}

ReactorEngine::ReactorEngine(ContextStore& store, TraceRecorder* trace)
    : store_(store), trace_(trace)
{
}

void ReactorEngine::register_server(ServerSpec spec)
{
    if (spec.stage_id.empty())
        spec.stage_id = spec.server_id;
    for (const auto& r : reactors_) {
        if (r.spec.server_id == spec.server_id)
            throw DuplicateIdError("duplicate server id: " + spec.server_id);
        if (r.spec.done_key == spec.done_key)
            throw DuplicateIdError("duplicate done key: " + spec.done_key);
    }
    if (!spec.action)
        throw std::invalid_argument("server " + spec.server_id + " has no action");
    Reactor reactor{std::move(spec)};
    const Subscription sub = store_.subscribe(reactor.spec.trigger, reactor.spec.server_id);
    reactor.subscription = sub.id;
    by_subscription_.emplace(sub.id, reactors_.size());
    reactors_.push_back(std::move(reactor));
    absorb_notifications();
}

void ReactorEngine::absorb_notifications()
{
    auto arm = [&](const Notification& n) {
        auto it = by_subscription_.find(n.subscription_id);
        if (it != by_subscription_.end())
            reactors_[it->second].state = ReactorState::ready;
    };
    if (store_.mode() == DeliveryMode::deterministic) {
        for (const auto& n : store_.drain_notifications())
            arm(n);
    } else {
        for (const auto& r : reactors_) {
            for (const auto& n : store_.take_notifications(r.spec.server_id))
                arm(n);
        }
    }
}

std::vector<std::size_t> ReactorEngine::ready_indices() const
{
    std::vector<std::size_t> ready;
    for (std::size_t i = 0; i < reactors_.size(); ++i) {
        if (reactors_[i].state == ReactorState::ready)
            ready.push_back(i);
    }
    return ready;
}

bool ReactorEngine::has_ready()
{
    absorb_notifications();
    return !ready_indices().empty();
}

void ReactorEngine::fire(Reactor& reactor, int step_number)
{
    const ServerSpec& spec = reactor.spec;
    {
        std::lock_guard lock(log_mutex_);
        fire_log_.push_back(spec.server_id);
    }
    if (trace_)
        trace_->record(EventKind::trigger_fire, Value{{"server", spec.server_id}, {"step", step_number}});

    ActionResult result;
    try {
        const Snapshot snapshot = store_.snapshot();
        result = spec.action(snapshot);
        if (result.ok() && (result.writes.empty() || result.writes.back().key != spec.done_key ||
                            !values_equal(result.writes.back().value, true)))
            result = ActionResult::failed("action result does not end with (" + spec.done_key +
                                          ", true)");
    } catch (const std::exception& e) {
        result = ActionResult::failed(std::string("action threw: ") + e.what());
    } catch (...) {
        result = ActionResult::failed("action threw a non-standard exception");
    }

    if (trace_) {
        trace_->record(EventKind::tool_exec,
                       Value{{"server", spec.server_id},
                             {"stage", spec.stage_id},
                             {"tool", spec.tools.empty() ? spec.server_id : spec.tools.front().name}});
    }

    if (result.ok()) {
        try {
            if (trace_) {
                for (const auto& w : result.writes)
                    trace_->message(spec.server_id, ContextWrite{w.key, w.value});
            }
            store_.put_batch(result.writes, spec.server_id);
        } catch (const std::exception& e) {
            result = ActionResult::failed(std::string("commit rejected: ") + e.what());
        }
    }

    if (result.ok()) {
        reactor.state = ReactorState::fired;
        reactor.failure.reset();
        if (trace_) {
            Value outputs = Value::object();
            for (const auto& w : result.writes) {
                if (w.key != spec.done_key)
                    outputs[w.key] = w.value;
            }
            trace_->record(EventKind::stage_done, Value{{"stage", spec.stage_id},
                                                        {"server", spec.server_id},
                                                        {"outputs", std::move(outputs)}});
        }
    } else {
        reactor.state = ReactorState::failed;
        reactor.failure = result.failure;
        if (trace_) {
            trace_->record(EventKind::stage_failed, Value{{"stage", spec.stage_id},
                                                          {"server", spec.server_id},
                                                          {"reason", *result.failure}});
        }
    }
}

std::vector<std::string> ReactorEngine::step()
{
    absorb_notifications();
    const auto ready = ready_indices();
    if (ready.empty())
        return {};
    const int step_number = ++steps_;
    std::vector<std::string> fired;
    for (std::size_t i : ready) {
        fire(reactors_[i], step_number);
        fired.push_back(reactors_[i].spec.server_id);
    }
    return fired;
}

std::vector<std::string> ReactorEngine::step_parallel()
{
    absorb_notifications();
    const auto ready = ready_indices();
    if (ready.empty())
        return {};
    const int step_number = ++steps_;
    const auto n = static_cast<long>(ready.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < n; ++k)
        fire(reactors_[ready[static_cast<std::size_t>(k)]], step_number);
    std::vector<std::string> fired;
    for (std::size_t i : ready)
        fired.push_back(reactors_[i].spec.server_id);
    return fired;
}

int ReactorEngine::run_until_quiescent(int max_steps, bool parallel)
{
    if (max_steps < 1)
        throw std::invalid_argument("max_steps must be >= 1");
    int taken = 0;
    while (has_ready()) {
        if (taken == max_steps)
            throw BudgetExceeded("no quiescence after " + std::to_string(max_steps) + " steps");
        if (parallel)
            step_parallel();
        else
            step();
        ++taken;
    }
    return taken;
}

const ReactorEngine::Reactor& ReactorEngine::find(std::string_view server_id) const
{
    for (const auto& r : reactors_) {
        if (r.spec.server_id == server_id)
            return r;
    }
    throw std::out_of_range("unknown server: " + std::string(server_id));
}

ReactorState ReactorEngine::state(std::string_view server_id) const
{
    return find(server_id).state;
}

std::optional<std::string> ReactorEngine::failure(std::string_view server_id) const
{
    return find(server_id).failure;
}

std::vector<std::string> ReactorEngine::fire_log() const
{
    std::lock_guard lock(log_mutex_);
    return fire_log_;
}

std::vector<ToolDeclaration> ReactorEngine::declarations() const
{
    std::vector<ToolDeclaration> out;
    for (const auto& r : reactors_)
        out.push_back(r.spec.declaration());
    return out;
}

}  // namespace camcp
