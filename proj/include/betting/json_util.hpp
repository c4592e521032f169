#pragma once

#include <json.hpp>

#include "betting/dyadic.hpp"
#include "betting/schedule.hpp"

namespace betting {

using json = nlohmann::json;

// Dyadics serialize as {"num": "<decimal string>", "exp": <nat>}.
json dyadic_to_json(const Dyadic& d);
Dyadic dyadic_from_json(const json& j);

// Schedules serialize as {"spec": "...", "horizon": H} plus "offset" when nonzero.
json schedule_to_json(const WagerSchedule& g);
WagerSchedule schedule_from_json(const json& j);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace betting
