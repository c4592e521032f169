#pragma once

#include <cstdint>
#include <vector>

#include "betting/json_util.hpp"
#include "betting/report.hpp"
#include "betting/schedule.hpp"
#include "betting/table.hpp"

namespace betting {

// One stage of a left-c.e.-style approximation: a granular hat table plus
// nonnegative tail coefficients. The full stage value is
//   N_s(sigma) = hat(sigma) + f_s(|sigma|),  f_s(n) = Sum_{i >= n} q_i
// with the sum running over the stage's own coefficient list. The tail is the
// capital reserved from betting; granularity constrains only the hat part.
struct Stage {
    CapitalTable hat;
    std::vector<Dyadic> tail;

    Dyadic tail_sum(int64_t n) const;              // f_s(n)
    Dyadic full(int64_t level, uint64_t index) const;
};

struct StagedSupermartingale {
    WagerSchedule g;
    int64_t depth = 0;
    std::vector<Stage> stages;

    const Stage& limit() const { return stages.back(); }
    bool strongly_granular() const;                // all tails zero
};

// Validates the three stage invariants: hat tables pointwise nondecreasing
// across stages, every full stage value a supermartingale, every hat value an
// integer multiple of 2^-g(n). Reports the first violation.
Report staged_validate(const StagedSupermartingale& s);

json staged_to_json(const StagedSupermartingale& s);
StagedSupermartingale staged_from_json(const json& j);

}  // namespace betting
