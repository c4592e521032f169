#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betting/json_util.hpp"
#include "betting/report.hpp"
#include "betting/schedule.hpp"
#include "betting/table.hpp"

namespace betting {

// One defined entry of a toy functional at level n: the oracle prefix tau
// (|tau| = n + g(n)) computes the output nu (|nu| = n). `stamp` is the stage
// at which the entry is enumerated; stamps are distinct across the whole
// functional, one entry per stage.
struct FuncEntry {
    BitString tau;
    BitString nu;
    int64_t stamp = 0;
};

// Extensional toy Turing functional with oblivious use n + g(n): levels[n]
// lists the defined entries of the level-n partial map, 0 <= n <= depth.
// The use bound is structural; only the preimage structure and the
// enumeration order of the functional are ever consumed.
struct ToyFunctional {
    WagerSchedule g;
    int64_t depth = 0;
    std::string name;
    std::vector<std::vector<FuncEntry>> levels;
};

// Shape of every entry, one output per input, globally distinct stamps, and
// monotone consistency: a defined level-(n+1) entry restricted to its first
// n + g(n) oracle bits must be a defined level-n entry computing the first n
// output bits.
Report validate_functional(const ToyFunctional& f);

// h(nu): number of tau of length |nu| + g(|nu|) with level map tau -> nu.
int64_t preimage_count(const ToyFunctional& f, const BitString& nu);

// All counts h(nu) for |nu| <= depth plus the consistency consequence
//   h(nu*0) + h(nu*1) <= 2^{1+g(|nu|+1)-g(|nu|)} h(nu)
// checked at every internal node.
struct PreimageCensus {
    std::vector<std::vector<int64_t>> counts;  // counts[n][index]
    Report report;
};
PreimageCensus preimage_census(const ToyFunctional& f);

// h*(nu) = 2^{-g(|nu|)} h(nu): a strongly g-granular supermartingale table.
CapitalTable counting_martingale(const ToyFunctional& f);

// Q(d, nu): the preimages of nu in stamp order — all of them when there are
// at most 2^{d+g(|nu|)}, otherwise frozen at the largest stage where the
// count was still below that cutoff (the first 2^{d+g(|nu|)} - 1).
std::vector<BitString> restricted_enumeration(const ToyFunctional& f, int64_t d,
                                              const BitString& nu);

json functional_to_json(const ToyFunctional& f);
ToyFunctional functional_from_json(const json& j);

}  // namespace betting
