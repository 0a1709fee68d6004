#include "camcp/store.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "camcp/errors.hpp"

namespace camcp {

const ContextEntry* Snapshot::find(std::string_view key) const
{
    auto it = entries.find(key);
    return it == entries.end() ? nullptr : &it->second;
}

ContextStore::ContextStore(DeliveryMode mode) : mode_(mode) {}

namespace {

void check_write(std::string_view key, const Value& value)
{
    if (key.empty())
        throw std::invalid_argument("context store key must be nonempty");
    if (!is_context_value(value))
        throw std::invalid_argument("not a context value for key '" + std::string(key) + "'");
}

}  // namespace

std::int64_t ContextStore::put(std::string_view key, Value value, std::string_view writer_id)
{
    check_write(key, value);
    std::lock_guard lock(mutex_);
    return commit_locked(key, std::move(value), writer_id);
}

CasResult ContextStore::cas_put(std::string_view key, Value value, std::int64_t expected_version,
                                std::string_view writer_id)
{
    if (expected_version < 0)
        throw std::invalid_argument("expected_version must be >= 0");
    check_write(key, value);
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    const std::int64_t current = it == entries_.end() ? 0 : it->second.version;
    if (current != expected_version)
        return {false, current};
    return {true, commit_locked(key, std::move(value), writer_id)};
}

std::vector<std::int64_t> ContextStore::put_batch(std::span<const Write> writes,
                                                  std::string_view writer_id)
{
    for (const auto& w : writes)
        check_write(w.key, w.value);
    std::vector<std::int64_t> versions;
    versions.reserve(writes.size());
    std::lock_guard lock(mutex_);
    for (const auto& w : writes)
        versions.push_back(commit_locked(w.key, w.value, writer_id));
    return versions;
}

std::int64_t ContextStore::commit_locked(std::string_view key, Value value,
                                         std::string_view writer_id)
{
    auto it = entries_.find(key);
    if (it == entries_.end())
        it = entries_.emplace(std::string(key), ContextEntry{std::string(key), {}, 0, {}, 0}).first;
    ContextEntry& entry = it->second;
    entry.value = std::move(value);
    entry.version += 1;
    entry.writer_id = std::string(writer_id);
    entry.logical_time = ++clock_;
    log_.push_back(entry);
    if (log_sink_)
        *log_sink_ << encode_commit(entry) << '\n';
    if (observer_)
        observer_(entry);
    evaluate_subscriptions_locked();
    return entry.version;
}

void ContextStore::evaluate_subscriptions_locked()
{
    // Subscriptions are kept in id order, so one commit's notifications come
    // out in id order.
    for (auto& sub : subscriptions_) {
        const bool now = sub.condition.evaluate(entries_);
        if (now && !sub.last_state)
            enqueue_locked(sub);
        sub.last_state = now;
    }
}

void ContextStore::enqueue_locked(const Subscription& sub)
{
    Notification n{sub.id, clock_};
    if (mode_ == DeliveryMode::deterministic) {
        pending_.push_back(n);
    } else {
        queues_[sub.subscriber_id].push_back(n);
        queue_cv_.notify_all();
    }
}

std::optional<ContextEntry> ContextStore::get(std::string_view key) const
{
    std::lock_guard lock(mutex_);
    auto it = entries_.find(key);
    if (it == entries_.end())
        return std::nullopt;
    return it->second;
}

Snapshot ContextStore::snapshot() const
{
    std::lock_guard lock(mutex_);
    return Snapshot{entries_, clock_};
}

std::int64_t ContextStore::logical_time() const
{
    std::lock_guard lock(mutex_);
    return clock_;
}

Subscription ContextStore::subscribe(Condition condition, std::string subscriber_id)
{
    std::lock_guard lock(mutex_);
    Subscription sub{next_subscription_++, std::move(condition), std::move(subscriber_id), false};
    sub.last_state = sub.condition.evaluate(entries_);
    if (sub.last_state)
        enqueue_locked(sub);
    subscriptions_.push_back(sub);
    return sub;
}

std::vector<Notification> ContextStore::drain_notifications()
{
    std::lock_guard lock(mutex_);
    std::vector<Notification> out;
    out.swap(pending_);
    std::stable_sort(out.begin(), out.end());
    return out;
}

std::vector<Notification> ContextStore::take_notifications(std::string_view subscriber_id)
{
    std::lock_guard lock(mutex_);
    auto it = queues_.find(subscriber_id);
    if (it == queues_.end())
        return {};
    std::vector<Notification> out(it->second.begin(), it->second.end());
    it->second.clear();
    return out;
}

std::optional<Notification> ContextStore::wait_notification(std::string_view subscriber_id,
                                                            std::chrono::milliseconds timeout)
{
    std::unique_lock lock(mutex_);
    auto ready = [&] {
        auto it = queues_.find(subscriber_id);
        return it != queues_.end() && !it->second.empty();
    };
    if (!queue_cv_.wait_for(lock, timeout, ready))
        return std::nullopt;
    auto& queue = queues_.find(subscriber_id)->second;
    Notification n = queue.front();
    queue.pop_front();
    return n;
}

std::vector<ContextEntry> ContextStore::commit_log() const
{
    std::lock_guard lock(mutex_);
    return log_;
}

std::vector<Subscription> ContextStore::subscriptions() const
{
    std::lock_guard lock(mutex_);
    return subscriptions_;
}

void ContextStore::set_commit_observer(CommitObserver observer)
{
    std::lock_guard lock(mutex_);
    observer_ = std::move(observer);
}

void ContextStore::set_log_sink(std::ostream* sink)
{
    std::lock_guard lock(mutex_);
    log_sink_ = sink;
}

std::string ContextStore::encode_commit(const ContextEntry& entry)
{
    Value line{{"t", entry.logical_time},
               {"key", entry.key},
               {"version", entry.version},
               {"writer", entry.writer_id},
               {"value", entry.value}};
    return canonical(line);
}

void ContextStore::write_commit_log(std::ostream& out) const
{
    for (const auto& entry : commit_log())
        out << encode_commit(entry) << '\n';
}

std::unique_ptr<ContextStore> ContextStore::replay(std::istream& in, DeliveryMode mode)
{
    auto store = std::make_unique<ContextStore>(mode);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        auto fail = [&](const std::string& what) {
            return Error("commit log line " + std::to_string(line_no) + ": " + what);
        };
        Value v;
        try {
            v = parse_value(line);
        } catch (const std::exception& e) {
            throw fail(e.what());
        }
        if (!v.is_object() || !v.contains("t") || !v.contains("key") || !v.contains("version") ||
            !v.contains("writer") || !v.contains("value"))
            throw fail("expected {t, key, version, writer, value}");
        if (!v["t"].is_number_integer() || !v["version"].is_number_integer() ||
            !v["key"].is_string() || !v["writer"].is_string())
            throw fail("ill-typed field");
        const auto t = v["t"].get<std::int64_t>();
        const auto key = v["key"].get<std::string>();
        const auto version = v["version"].get<std::int64_t>();
        if (t != store->clock_ + 1)
            throw fail("logical time " + std::to_string(t) + " out of sequence");
        auto existing = store->entries_.find(key);
        const std::int64_t prev = existing == store->entries_.end() ? 0 : existing->second.version;
        if (version != prev + 1)
            throw fail("version " + std::to_string(version) + " out of sequence for '" + key + "'");
        store->put(key, v["value"], v["writer"].get<std::string>());
    }
    return store;
}

}  // namespace camcp
