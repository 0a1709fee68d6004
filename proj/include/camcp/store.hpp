#pragma once

#include <chrono>
#include <compare>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/condition.hpp"
#include "camcp/entry.hpp"
#include "camcp/value.hpp"

namespace camcp {

/// deterministic: notifications accumulate in one list read by
/// drain_notifications(). concurrent: each subscriber gets its own FIFO
/// queue, readable from any thread.
enum class DeliveryMode { deterministic, concurrent };

using SubscriptionId = std::int64_t;

struct Subscription {
    SubscriptionId id = 0;
    Condition condition;
    std::string subscriber_id;
    bool last_state = false;
};

struct Notification {
    SubscriptionId subscription_id = 0;
    std::int64_t logical_time = 0;

    friend auto operator<=>(const Notification& a, const Notification& b)
    {
        if (auto c = a.logical_time <=> b.logical_time; c != 0)
            return c;
        return a.subscription_id <=> b.subscription_id;
    }
    friend bool operator==(const Notification&, const Notification&) = default;
};

/// Consistent cut of the store: every commit with logical_time <= this one,
/// none after.
struct Snapshot {
    EntryMap entries;
    std::int64_t logical_time = 0;

    const ContextEntry* find(std::string_view key) const;
    bool contains(std::string_view key) const { return find(key) != nullptr; }
};

struct CasResult {
    bool committed = false;
    /// The new version when committed, otherwise the current version
    /// (0 if the key is absent).
    std::int64_t version = 0;

    explicit operator bool() const { return committed; }
};

struct Write {
    std::string key;
    Value value;
};

/// The shared context store: a versioned key/value blackboard.
///
/// Every commit gets the next logical time (1, 2, ...) and bumps the key's
/// version by one. After each commit all subscriptions are re-evaluated
/// against the new state and false->true transitions enqueue notifications.
/// All members are safe to call concurrently; commits are serialized by one
/// internal lock, which is the sequencer.
///
/// There is no delete: write null to tombstone a key.
class ContextStore {
public:
    using CommitObserver = std::function<void(const ContextEntry&)>;

    explicit ContextStore(DeliveryMode mode = DeliveryMode::deterministic);
    ContextStore(const ContextStore&) = delete;
    ContextStore& operator=(const ContextStore&) = delete;

    DeliveryMode mode() const noexcept { return mode_; }

    /// Last-write-wins commit. Returns the new version.
    std::int64_t put(std::string_view key, Value value, std::string_view writer_id);

    /// Commits iff the key's current version equals `expected_version`
    /// (0 = key must not exist).
    CasResult cas_put(std::string_view key, Value value, std::int64_t expected_version,
                      std::string_view writer_id);

    /// Commits every write in order under one lock, so no reader observes a
    /// prefix of the batch. Each write is still its own commit (own logical
    /// time, own edge evaluation). Returns the new versions.
    std::vector<std::int64_t> put_batch(std::span<const Write> writes, std::string_view writer_id);

    std::optional<ContextEntry> get(std::string_view key) const;
    Snapshot snapshot() const;
    std::int64_t logical_time() const;

    /// Registers the condition. If it already holds, one notification is
    /// enqueued at the current logical time.
    Subscription subscribe(Condition condition, std::string subscriber_id);

    /// Returns and clears pending notifications ordered by
    /// (logical_time, subscription id). Deterministic mode only.
    std::vector<Notification> drain_notifications();

    /// Returns and clears the queue of one subscriber, commit order.
    /// Concurrent mode only.
    std::vector<Notification> take_notifications(std::string_view subscriber_id);
    std::optional<Notification> wait_notification(std::string_view subscriber_id,
                                                  std::chrono::milliseconds timeout);

    std::vector<ContextEntry> commit_log() const;
    std::vector<Subscription> subscriptions() const;

    /// Called under the store lock for each commit, in commit order.
    void set_commit_observer(CommitObserver observer);
    /// Streams each commit as a JSON line to `sink` (may be null).
    void set_log_sink(std::ostream* sink);

    /// {"key":..,"t":..,"value":..,"version":..,"writer":..} on one line.
    static std::string encode_commit(const ContextEntry& entry);
    void write_commit_log(std::ostream& out) const;
    /// Rebuilds a store from a commit log; rejects gaps in logical time and
    /// version sequences.
    static std::unique_ptr<ContextStore> replay(std::istream& in,
                                                DeliveryMode mode = DeliveryMode::deterministic);

private:
    std::int64_t commit_locked(std::string_view key, Value value, std::string_view writer_id);
    void evaluate_subscriptions_locked();
    void enqueue_locked(const Subscription& sub);

    const DeliveryMode mode_;
    mutable std::mutex mutex_;
    std::condition_variable queue_cv_;
    EntryMap entries_;
    std::vector<ContextEntry> log_;
    std::int64_t clock_ = 0;
    std::vector<Subscription> subscriptions_;
    SubscriptionId next_subscription_ = 1;
    std::vector<Notification> pending_;
    std::map<std::string, std::deque<Notification>, std::less<>> queues_;
    CommitObserver observer_;
    std::ostream* log_sink_ = nullptr;
};

}  // namespace camcp
