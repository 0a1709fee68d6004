#include "camcp/catalog.hpp"

namespace camcp {

std::string constraint_key(std::string_view name)
{
    return std::string(kConstraintPrefix) + std::string(name);
}

namespace {

Value object_schema(std::initializer_list<std::pair<const char*, const char*>> props)
{
    Value properties = Value::object();
    for (const auto& [name, type] : props)
        properties[name] = Value{{"type", type}};
    return Value{{"type", "object"}, {"properties", std::move(properties)}};
}

std::vector<StageTemplate> travel_catalog()
{
    const Condition seeded = Condition::exists(std::string(kSeedFlag));
    return {
        {"location", "location_server", "Recommend attractions at the destination that fit the preferences",
         "location_done", "location", seeded, {"destination"}, {"preferences", "days"}, {}, {},
         {"recommend_locations", "Ranks attractions for a destination by preference match",
          object_schema({{"destination", "string"}, {"preferences", "array"}, {"days", "integer"}})}},
        {"weather", "weather_server", "Provide a daily weather forecast for the trip",
         "weather_done", "weather", Condition::exists("location_done"), {"destination", "days"}, {},
         {"location"}, {},
         {"forecast_weather", "Returns one forecast per trip day",
          object_schema({{"destination", "string"}, {"days", "integer"}})}},
        {"hotel", "hotel_server", "Book a hotel for every night within budget",
         "hotel_done", "hotel", Condition::exists("location_done"), {"days", "budget"}, {},
         {"location"}, {},
         {"book_hotel", "Chooses the best-rated hotel whose stay fits half the budget",
          object_schema({{"destination", "string"}, {"days", "integer"}, {"budget", "number"}})}},
        {"dining", "dining_server", "Suggest one dinner per day respecting diet and remaining budget",
         "dining_done", "dining", Condition::exists("hotel_done"), {"budget"}, {"preferences", "days"},
         {"location", "hotel"}, {},
         {"suggest_dining", "Plans dinners that honor dietary preferences and the remaining budget",
          object_schema({{"budget", "number"}, {"preferences", "array"}, {"days", "integer"}})}},
    };
}

std::vector<StageTemplate> wedding_catalog()
{
    const Condition seeded = Condition::exists(std::string(kSeedFlag));
    return {
        {"arrival_tracker", "arrival_tracker", "Track guest arrivals and post their pickups",
         "arrival_tracker_done", "arrivals", seeded, {}, {}, {}, {},
         {"track_arrivals", "Turns guest arrival times into transport requests",
          object_schema({{"guests", "array"}})}},
        {"errand_tracker", "errand_tracker", "Track wedding errands and post their rides",
         "errand_tracker_done", "errands", seeded, {}, {}, {}, {},
         {"track_errands", "Turns errands into transport requests",
          object_schema({{"errands", "array"}})}},
        {"transport", "transport", "Schedule the shared vehicle for every transport request",
         "transport_done", "schedule",
         Condition::all_of({Condition::exists("arrival_tracker_done"),
                            Condition::exists("errand_tracker_done")}),
         {"vehicle_capacity", "trip_duration_min"}, {}, {"arrivals", "errands"},
         {std::string(kTransportRequestPrefix)},
         {"schedule_transport", "Batches transport requests into vehicle trips",
          object_schema({{"requests", "array"}, {"capacity", "integer"}, {"duration_min", "integer"}})}},
    };
}

}  // namespace

const std::vector<StageTemplate>& stage_catalog(QueryKind kind)
{
    static const std::vector<StageTemplate> travel = travel_catalog();
    static const std::vector<StageTemplate> wedding = wedding_catalog();
    return kind == QueryKind::travel ? travel : wedding;
}

std::string completion_key_for(QueryKind kind)
{
    return std::string(to_string(kind)) + "_complete";
}

}  // namespace camcp
