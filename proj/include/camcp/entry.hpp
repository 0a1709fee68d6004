#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "camcp/value.hpp"

namespace camcp {

/// One committed cell of the context store.
struct ContextEntry {
    std::string key;
    Value value;
    std::int64_t version = 0;
    std::string writer_id;
    std::int64_t logical_time = 0;

    friend bool operator==(const ContextEntry& a, const ContextEntry& b)
    {
        return a.key == b.key && values_equal(a.value, b.value) && a.version == b.version &&
               a.writer_id == b.writer_id && a.logical_time == b.logical_time;
    }
};

using EntryMap = std::map<std::string, ContextEntry, std::less<>>;

}  // namespace camcp
