#include "camcp/schedule.hpp"

#include <algorithm>
#include <stdexcept>

#include "camcp/errors.hpp"
#include "camcp/plan_types.hpp"

namespace camcp {

Value TransportRequest::to_value() const
{
    return Value{{"request_id", request_id},
                 {"origin", origin},
                 {"destination", destination},
                 {"ready_time_min", ready_time_min},
                 {"source", source == RequestSource::arrival ? "arrival" : "errand"}};
}

TransportRequest TransportRequest::from_value(const Value& v, const std::string& field)
{
    using namespace detail;
    if (!v.is_object())
        throw SchemaError(field, "expected a map");
    TransportRequest r;
    r.request_id = require_text(v, "request_id", field);
    r.origin = require_text(v, "origin", field);
    r.destination = require_text(v, "destination", field);
    const Value& ready = require(v, "ready_time_min", field);
    if (!ready.is_number_integer() || ready.get<std::int64_t>() < 0)
        throw SchemaError(join_field(field, "ready_time_min"), "expected an integer >= 0");
    r.ready_time_min = ready.get<std::int64_t>();
    const std::string source = require_text(v, "source", field);
    if (source != "arrival" && source != "errand")
        throw SchemaError(join_field(field, "source"), "expected arrival or errand");
    r.source = source == "arrival" ? RequestSource::arrival : RequestSource::errand;
    return r;
}

Value Schedule::to_value() const
{
    Value trip_list = Value::array();
    for (const auto& trip : trips) {
        Value reqs = Value::array();
        for (const auto& r : trip.requests)
            reqs.push_back(r.to_value());
        trip_list.push_back(Value{{"trip_id", trip.trip_id},
                                  {"requests", std::move(reqs)},
                                  {"start_min", trip.start_min},
                                  {"duration_min", trip.duration_min}});
    }
    return Value{{"trips", std::move(trip_list)}, {"makespan_min", makespan_min}};
}

Schedule Schedule::from_value(const Value& v, const std::string& field)
{
    using namespace detail;
    if (!v.is_object())
        throw SchemaError(field, "expected a map");
    Schedule s;
    const Value& trips = require_list(v, "trips", field);
    for (std::size_t i = 0; i < trips.size(); ++i) {
        const std::string at = join_field(field, "trips[" + std::to_string(i) + "]");
        Trip trip;
        trip.trip_id = require(trips[i], "trip_id", at).get<std::int64_t>();
        trip.start_min = require(trips[i], "start_min", at).get<std::int64_t>();
        trip.duration_min = require(trips[i], "duration_min", at).get<std::int64_t>();
        const Value& reqs = require_list(trips[i], "requests", at);
        for (std::size_t k = 0; k < reqs.size(); ++k)
            trip.requests.push_back(
                TransportRequest::from_value(reqs[k], join_field(at, "requests[" + std::to_string(k) + "]")));
        s.trips.push_back(std::move(trip));
    }
    s.makespan_min = require(v, "makespan_min", field).get<std::int64_t>();
    return s;
}

Schedule batch_requests(std::vector<TransportRequest> requests, int capacity, std::int64_t duration_min)
{
    if (capacity < 1)
        throw std::invalid_argument("vehicle capacity must be >= 1");
    if (duration_min < 0)
        throw std::invalid_argument("trip duration must be >= 0");
    std::sort(requests.begin(), requests.end(), [](const auto& a, const auto& b) {
        if (a.ready_time_min != b.ready_time_min)
            return a.ready_time_min < b.ready_time_min;
        return a.request_id < b.request_id;
    });

    Schedule schedule;
    std::int64_t vehicle_free = 0;
    for (std::size_t i = 0; i < requests.size(); i += static_cast<std::size_t>(capacity)) {
        const std::size_t end = std::min(requests.size(), i + static_cast<std::size_t>(capacity));
        Trip trip;
        trip.trip_id = static_cast<std::int64_t>(schedule.trips.size()) + 1;
        trip.requests.assign(requests.begin() + static_cast<std::ptrdiff_t>(i),
                             requests.begin() + static_cast<std::ptrdiff_t>(end));
        // Sorted, so the last request aboard is the latest ready.
        trip.start_min = std::max(vehicle_free, trip.requests.back().ready_time_min);
        trip.duration_min = duration_min;
        vehicle_free = trip.end_min();
        schedule.makespan_min = std::max(schedule.makespan_min, trip.end_min());
        schedule.trips.push_back(std::move(trip));
    }
    return schedule;
}

int coordination_score(const Schedule& schedule)
{
    return std::any_of(schedule.trips.begin(), schedule.trips.end(),
                       [](const Trip& t) { return t.requests.size() >= 2; })
               ? 1
               : 0;
}

}  // namespace camcp
