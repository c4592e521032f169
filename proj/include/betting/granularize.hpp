#pragma once

#include "betting/staged.hpp"
#include "betting/table.hpp"

namespace betting {

// Granularization of a supermartingale table N over schedule g with horizon H:
//   hat(sigma)  = S(N(sigma), 2^-g(|sigma|))   (largest multiple strictly below)
//   tail        = (2^-g(0), ..., 2^-g(H))
//   combined    = hat(sigma) + f(|sigma|),  f(n) = Sum_{n <= i <= H} 2^-g(i).
// The tail sum starts at n (it includes the 2^-g(n) term): exactly that term
// absorbs the rounding loss N(sigma) - hat(sigma) <= 2^-g(|sigma|) at each
// step, which is what makes `combined` a supermartingale for every
// nondecreasing g. Granularity is a property of the hat part; the tail is the
// reserved, non-betting capital and is exempt by definition.
struct GranularizeResult {
    CapitalTable hat;
    std::vector<Dyadic> tail;
    CapitalTable combined;

    StagedSupermartingale staged(const WagerSchedule& g) const;  // single-stage view
};

GranularizeResult granularize(const CapitalTable& N, const WagerSchedule& g, int64_t horizon);

}  // namespace betting
