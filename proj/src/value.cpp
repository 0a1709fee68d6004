#include "camcp/value.hpp"

#include <cmath>

namespace camcp {

bool values_equal(const Value& a, const Value& b)
{
    return a == b;
}

bool is_context_value(const Value& v)
{
    switch (v.type()) {
    case Value::value_t::null:
    case Value::value_t::boolean:
    case Value::value_t::number_integer:
    case Value::value_t::number_unsigned:
    case Value::value_t::string:
        return true;
    case Value::value_t::number_float:
        return std::isfinite(v.get<double>());
    case Value::value_t::array:
        for (const auto& item : v) {
            if (!is_context_value(item))
                return false;
        }
        return true;
    case Value::value_t::object:
        for (const auto& [key, item] : v.items()) {
            if (!is_context_value(item))
                return false;
        }
        return true;
    default:
        return false;
    }
}

std::string canonical(const Value& v)
{
    return v.dump();
}

Value parse_value(std::string_view text)
{
    return Value::parse(text.begin(), text.end());
}

std::string_view shape_name(const Value& v)
{
    if (v.is_null())
        return "null";
    if (v.is_boolean())
        return "boolean";
    if (v.is_number())
        return "number";
    if (v.is_string())
        return "text";
    if (v.is_array())
        return "list";
    return "map";
}

}  // namespace camcp
