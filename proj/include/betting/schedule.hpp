#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betting/dyadic.hpp"
#include "betting/report.hpp"

namespace betting {

// Wager schedule g: nonnegative, nondecreasing, total on [0, horizon].
// Spec grammar: const:<k> | linear:<a>:<b> (a*n+b) | log2ceil:<m>
// (m * ceil(log2(n+2))) | table:<v0,v1,...> (last value extends).
// `offset` shifts every value; the counterstrategy output uses g+1.
class WagerSchedule {
public:
    static WagerSchedule parse(const std::string& spec, int64_t horizon);

    int64_t eval(int64_t n) const;                 // throws "schedule exhausted"
    int64_t horizon() const { return horizon_; }
    int64_t offset() const { return offset_; }
    const std::string& spec() const { return spec_; }

    WagerSchedule successor() const;               // g+1 over the same horizon

    // Sum_{i=0..n} 2^-g(i), or with every exponent bumped by one when halved.
    Dyadic partial_sum(int64_t n, bool halved) const;

private:
    enum class Kind { Const, Linear, Log2Ceil, Table };
    Kind kind_ = Kind::Const;
    int64_t k_ = 0, a_ = 0, b_ = 0, m_ = 0;
    std::vector<int64_t> table_;
    int64_t horizon_ = 0;
    int64_t offset_ = 0;
    std::string spec_;

    int64_t base_eval(int64_t n) const;
};

// Incremental prefix sums of 2^-g(i)-1 (halved) or 2^-g(i); memoized so that
// deep runs pay O(1) amortized per level.
class PartialSums {
public:
    PartialSums(const WagerSchedule& g, bool halved) : g_(g), halved_(halved) {}
    const Dyadic& upto(int64_t n);                 // Sum_{i=0..n}

private:
    const WagerSchedule& g_;
    bool halved_;
    std::vector<Dyadic> memo_;
};

}  // namespace betting
