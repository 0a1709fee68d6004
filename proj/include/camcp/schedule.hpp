#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "camcp/value.hpp"

namespace camcp {

enum class RequestSource { arrival, errand };

struct TransportRequest {
    std::string request_id;
    std::string origin;
    std::string destination;
    std::int64_t ready_time_min = 0;
    RequestSource source = RequestSource::arrival;

    Value to_value() const;
    /// Throws SchemaError.
    static TransportRequest from_value(const Value& v, const std::string& field = "request");

    friend bool operator==(const TransportRequest&, const TransportRequest&) = default;
};

struct Trip {
    std::int64_t trip_id = 0;
    std::vector<TransportRequest> requests;
    std::int64_t start_min = 0;
    std::int64_t duration_min = 0;

    std::int64_t end_min() const { return start_min + duration_min; }
    friend bool operator==(const Trip&, const Trip&) = default;
};

struct Schedule {
    std::vector<Trip> trips;
    std::int64_t makespan_min = 0;

    Value to_value() const;
    static Schedule from_value(const Value& v, const std::string& field = "schedule");
    friend bool operator==(const Schedule&, const Schedule&) = default;
};

/// Greedy single-vehicle batching: sort by (ready time, id), fill trips to
/// capacity in that order, run trips back to back. A trip leaves at the later
/// of the previous trip's return and the latest ready time aboard.
/// Throws std::invalid_argument if capacity < 1 or duration < 0.
Schedule batch_requests(std::vector<TransportRequest> requests, int capacity, std::int64_t duration_min);

/// 1 iff some trip carries at least two requests.
int coordination_score(const Schedule& schedule);

}  // namespace camcp
