#include "camcp/condition.hpp"

#include <algorithm>

#include "camcp/errors.hpp"

namespace camcp {

struct Condition::Node {
    Kind kind;
    std::string key;
    Value value;
    std::vector<Condition> children;
};

Condition Condition::exists(std::string key)
{
    return Condition(std::make_shared<const Node>(Node{Kind::exists, std::move(key), {}, {}}));
}

Condition Condition::equals(std::string key, Value value)
{
    return Condition(
        std::make_shared<const Node>(Node{Kind::equals, std::move(key), std::move(value), {}}));
}

Condition Condition::all_of(std::vector<Condition> children)
{
    return Condition(std::make_shared<const Node>(Node{Kind::all_of, {}, {}, std::move(children)}));
}

Condition Condition::any_of(std::vector<Condition> children)
{
    return Condition(std::make_shared<const Node>(Node{Kind::any_of, {}, {}, std::move(children)}));
}

Condition Condition::negate(Condition child)
{
    return Condition(std::make_shared<const Node>(Node{Kind::negate, {}, {}, {std::move(child)}}));
}

Condition::Kind Condition::kind() const
{
    return node_->kind;
}

const std::string& Condition::key() const
{
    return node_->key;
}

const Value& Condition::value() const
{
    return node_->value;
}

const std::vector<Condition>& Condition::children() const
{
    return node_->children;
}

bool Condition::evaluate(const EntryMap& state) const
{
    switch (node_->kind) {
    case Kind::exists:
        return state.find(node_->key) != state.end();
    case Kind::equals: {
        auto it = state.find(node_->key);
        return it != state.end() && values_equal(it->second.value, node_->value);
    }
    case Kind::all_of:
        return std::all_of(node_->children.begin(), node_->children.end(),
                           [&](const Condition& c) { return c.evaluate(state); });
    case Kind::any_of:
        return std::any_of(node_->children.begin(), node_->children.end(),
                           [&](const Condition& c) { return c.evaluate(state); });
    case Kind::negate:
        return !node_->children.front().evaluate(state);
    }
    return false;
}

std::set<std::string> Condition::keys() const
{
    std::set<std::string> out;
    if (node_->kind == Kind::exists || node_->kind == Kind::equals)
        out.insert(node_->key);
    for (const auto& child : node_->children)
        out.merge(child.keys());
    return out;
}

std::size_t Condition::depth() const
{
    std::size_t deepest = 0;
    for (const auto& child : node_->children)
        deepest = std::max(deepest, child.depth());
    return deepest + 1;
}

Value Condition::to_value() const
{
    switch (node_->kind) {
    case Kind::exists:
        return Value{{"exists", node_->key}};
    case Kind::equals:
        return Value{{"equals", Value{{"key", node_->key}, {"value", node_->value}}}};
    case Kind::all_of:
    case Kind::any_of: {
        Value list = Value::array();
        for (const auto& child : node_->children)
            list.push_back(child.to_value());
        return Value{{node_->kind == Kind::all_of ? "and" : "or", std::move(list)}};
    }
    case Kind::negate:
        return Value{{"not", node_->children.front().to_value()}};
    }
    return {};
}

Condition Condition::from_value(const Value& v, const std::string& field)
{
    if (!v.is_object() || v.size() != 1)
        throw SchemaError(field, "condition must be an object with exactly one operator");
    const std::string op = v.begin().key();
    const Value& arg = v.begin().value();
    const std::string path = field + "." + op;
    if (op == "exists") {
        if (!arg.is_string() || arg.get_ref<const std::string&>().empty())
            throw SchemaError(path, "exists takes a nonempty key");
        return exists(arg.get<std::string>());
    }
    if (op == "equals") {
        if (!arg.is_object() || arg.size() != 2 || !arg.contains("key") || !arg.contains("value"))
            throw SchemaError(path, "equals takes {key, value}");
        if (!arg["key"].is_string())
            throw SchemaError(path + ".key", "key must be text");
        if (!is_context_value(arg["value"]))
            throw SchemaError(path + ".value", "not a context value");
        return equals(arg["key"].get<std::string>(), arg["value"]);
    }
    if (op == "and" || op == "or") {
        if (!arg.is_array())
            throw SchemaError(path, "expected a list of conditions");
        std::vector<Condition> children;
        for (std::size_t i = 0; i < arg.size(); ++i)
            children.push_back(from_value(arg[i], path + "[" + std::to_string(i) + "]"));
        return op == "and" ? all_of(std::move(children)) : any_of(std::move(children));
    }
    if (op == "not")
        return negate(from_value(arg, path));
    throw SchemaError(path, "unknown condition operator");
}

bool operator==(const Condition& a, const Condition& b)
{
    if (a.node_ == b.node_)
        return true;
    const auto& x = *a.node_;
    const auto& y = *b.node_;
    return x.kind == y.kind && x.key == y.key && values_equal(x.value, y.value) &&
           x.children == y.children;
}

}  // namespace camcp
