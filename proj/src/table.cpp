#include "betting/table.hpp"

#include <fstream>

namespace betting {

namespace {
constexpr int64_t kMaxDepth = 24;

void check_depth(int64_t depth) {
    if (depth < 0 || depth > kMaxDepth) throw Error("table depth out of range");
}
}  // namespace

CapitalTable CapitalTable::zeros(int64_t depth) {
    return constant(depth, Dyadic::zero());
}

CapitalTable CapitalTable::constant(int64_t depth, const Dyadic& v) {
    check_depth(depth);
    CapitalTable t;
    t.depth = depth;
    t.levels.resize(static_cast<size_t>(depth) + 1);
    for (int64_t n = 0; n <= depth; ++n)
        t.levels[static_cast<size_t>(n)].assign(size_t(1) << n, v);
    return t;
}

Report check_supermartingale(const CapitalTable& t) {
    for (int64_t n = 0; n < t.depth; ++n) {
        const auto& parents = t.levels[static_cast<size_t>(n)];
        const auto& children = t.levels[static_cast<size_t>(n) + 1];
        for (uint64_t i = 0; i < parents.size(); ++i) {
            if (children[2 * i] + children[2 * i + 1] > parents[i] + parents[i]) {
                return Report::fail("supermartingale violated at '" +
                                    BitString::from_level_index(n, i).str() + "'");
            }
        }
    }
    return Report::ok();
}

Report check_granularity(const CapitalTable& t, const WagerSchedule& g) {
    for (int64_t n = 0; n <= t.depth; ++n) {
        int64_t gn = g.eval(n);
        const auto& level = t.levels[static_cast<size_t>(n)];
        for (uint64_t i = 0; i < level.size(); ++i) {
            if (!level[i].is_multiple_of_pow2(gn)) {
                return Report::fail("granularity violated at '" +
                                    BitString::from_level_index(n, i).str() + "': " +
                                    level[i].str() + " is not a multiple of 2^-" +
                                    std::to_string(gn));
            }
        }
    }
    return Report::ok();
}

json table_to_json(const CapitalTable& t) {
    json values = json::object();
    for (int64_t n = 0; n <= t.depth; ++n)
        for (uint64_t i = 0; i < t.levels[static_cast<size_t>(n)].size(); ++i)
            values[BitString::from_level_index(n, i).str()] = dyadic_to_json(t.at(n, i));
    return json{{"depth", t.depth}, {"values", values}};
}

CapitalTable table_from_json(const json& j) {
    if (!j.contains("depth") || !j.contains("values"))
        throw Error("table file needs 'depth' and 'values'");
    int64_t depth = j.at("depth").get<int64_t>();
    check_depth(depth);
    CapitalTable t = CapitalTable::zeros(depth);
    const json& values = j.at("values");
    size_t seen = 0;
    for (auto it = values.begin(); it != values.end(); ++it) {
        BitString s(it.key());
        if (s.size() > depth) throw Error("unexpected entry '" + it.key() + "' beyond depth");
        t.at(s) = dyadic_from_json(it.value());
        ++seen;
    }
    size_t expected = (size_t(2) << depth) - 1;
    if (seen != expected) throw Error("incomplete table");
    return t;
}

}  // namespace betting
