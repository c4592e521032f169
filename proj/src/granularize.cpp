#include "betting/granularize.hpp"

namespace betting {

StagedSupermartingale GranularizeResult::staged(const WagerSchedule& g) const {
    return StagedSupermartingale{g, hat.depth, {Stage{hat, tail}}};
}

GranularizeResult granularize(const CapitalTable& N, const WagerSchedule& g, int64_t horizon) {
    if (horizon < N.depth) throw Error("granularize horizon must be >= table depth");
    GranularizeResult r;
    r.hat = CapitalTable::zeros(N.depth);
    for (int64_t n = 0; n <= N.depth; ++n) {
        int64_t gn = g.eval(n);
        for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
            r.hat.at(n, i) = floor_multiple(N.at(n, i), gn);
    }
    r.tail.reserve(static_cast<size_t>(horizon) + 1);
    for (int64_t i = 0; i <= horizon; ++i) r.tail.emplace_back(1, g.eval(i));

    r.combined = r.hat;
    Dyadic f;  // Sum_{n <= i <= horizon} 2^-g(i), built from the top down
    for (int64_t n = N.depth; n >= 0; --n) {
        for (int64_t i = (n == N.depth ? horizon : n); i >= n; --i) f = f + r.tail[static_cast<size_t>(i)];
        for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
            r.combined.at(n, i) = r.combined.at(n, i) + f;
    }
    return r;
}

}  // namespace betting
