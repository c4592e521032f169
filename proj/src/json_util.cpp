#include "betting/json_util.hpp"

#include <fstream>

namespace betting {

json dyadic_to_json(const Dyadic& d) {
    return json{{"num", d.num().str()}, {"exp", d.exp()}};
}

Dyadic dyadic_from_json(const json& j) {
    if (!j.is_object() || !j.contains("num") || !j.contains("exp"))
        throw Error("dyadic must be {\"num\": \"<decimal>\", \"exp\": <nat>}");
    int64_t exp = j.at("exp").get<int64_t>();
    if (exp < 0) throw Error("dyadic exponent must be nonnegative");
    Int num;
    try {
        num = Int(j.at("num").get<std::string>());
    } catch (const std::runtime_error&) {
        throw Error("bad dyadic numerator");
    }
    return Dyadic(num, exp);
}

json schedule_to_json(const WagerSchedule& g) {
    json j{{"spec", g.spec()}, {"horizon", g.horizon()}};
    if (g.offset() != 0) j["offset"] = g.offset();
    return j;
}

WagerSchedule schedule_from_json(const json& j) {
    WagerSchedule g =
        WagerSchedule::parse(j.at("spec").get<std::string>(), j.at("horizon").get<int64_t>());
    if (j.contains("offset")) {
        int64_t off = j.at("offset").get<int64_t>();
        if (off < 0) throw Error("schedule offset must be nonnegative");
        for (int64_t i = 0; i < off; ++i) g = g.successor();
    }
    return g;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw Error("bad JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_json_file(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write '" + path + "'");
    out << j.dump(2) << '\n';
}

}  // namespace betting
