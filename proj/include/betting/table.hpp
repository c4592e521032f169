#pragma once

#include <cstdint>
#include <vector>

#include "betting/bitstring.hpp"
#include "betting/dyadic.hpp"
#include "betting/json_util.hpp"
#include "betting/report.hpp"
#include "betting/schedule.hpp"

namespace betting {

// Total map from binary strings of length <= depth to capital values, stored
// densely: levels[n][i] is the value at the i-th (lexicographically) string of
// length n. Predicates on tables are separate checks, not construction
// invariants, so failing tables are representable.
struct CapitalTable {
    int64_t depth = 0;
    std::vector<std::vector<Dyadic>> levels;

    static CapitalTable zeros(int64_t depth);
    static CapitalTable constant(int64_t depth, const Dyadic& v);

    Dyadic& at(int64_t level, uint64_t index) { return levels[static_cast<size_t>(level)][index]; }
    const Dyadic& at(int64_t level, uint64_t index) const {
        return levels[static_cast<size_t>(level)][index];
    }
    Dyadic& at(const BitString& s) { return at(s.size(), s.level_index()); }
    const Dyadic& at(const BitString& s) const { return at(s.size(), s.level_index()); }

    bool operator==(const CapitalTable&) const = default;
};

// h(sigma*0) + h(sigma*1) <= 2 h(sigma) at every internal node; on failure
// reports the length-lexicographically least violating sigma.
Report check_supermartingale(const CapitalTable& t);

// Every value at level n is an integer multiple of 2^-g(n).
Report check_granularity(const CapitalTable& t, const WagerSchedule& g);

json table_to_json(const CapitalTable& t);
CapitalTable table_from_json(const json& j);       // throws "incomplete table" on gaps

}  // namespace betting
