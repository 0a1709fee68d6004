#pragma once

#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "camcp/entry.hpp"
#include "camcp/value.hpp"

namespace camcp {

/// Watch predicate over store state. Immutable; copies share structure.
///
/// Evaluation is total: a missing key makes Exists and Equals false. It only
/// walks the predicate tree, never store contents, so cost is bounded by the
/// size of the tree.
class Condition {
public:
    enum class Kind { exists, equals, all_of, any_of, negate };

    static Condition exists(std::string key);
    static Condition equals(std::string key, Value value);
    static Condition all_of(std::vector<Condition> children);
    static Condition any_of(std::vector<Condition> children);
    static Condition negate(Condition child);

    Kind kind() const;
    const std::string& key() const;
    const Value& value() const;
    const std::vector<Condition>& children() const;

    bool evaluate(const EntryMap& state) const;

    /// Every key the predicate reads.
    std::set<std::string> keys() const;
    std::size_t depth() const;

    /// {"exists":k} | {"equals":{"key":k,"value":v}} | {"and":[...]} |
    /// {"or":[...]} | {"not":c}
    Value to_value() const;
    /// Throws SchemaError naming the offending path below `field`.
    static Condition from_value(const Value& v, const std::string& field = "condition");

    friend bool operator==(const Condition& a, const Condition& b);

private:
    struct Node;
    explicit Condition(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

}  // namespace camcp
