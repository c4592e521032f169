#include "betting/generators.hpp"

#include <algorithm>
#include <string>

namespace betting {

int64_t pick(Rng& rng, int64_t lo, int64_t hi) {
    return std::uniform_int_distribution<int64_t>(lo, hi)(rng);
}

WagerSchedule random_schedule(Rng& rng, int64_t horizon, int64_t max_g) {
    switch (pick(rng, 0, 3)) {
        case 0:
            return WagerSchedule::parse("const:" + std::to_string(pick(rng, 0, max_g)), horizon);
        case 1: {
            // Keep linear slopes shallow so deep levels stay within max_g.
            int64_t a = pick(rng, 0, 1);
            int64_t b = pick(rng, 0, std::max<int64_t>(0, max_g - a * horizon));
            return WagerSchedule::parse("linear:" + std::to_string(a) + ":" + std::to_string(b),
                                        horizon);
        }
        case 2:
            return WagerSchedule::parse("log2ceil:" + std::to_string(pick(rng, 1, 2)), horizon);
        default: {
            std::string spec = "table:";
            int64_t v = pick(rng, 0, 1);
            int64_t len = pick(rng, 1, std::max<int64_t>(1, horizon));
            for (int64_t i = 0; i < len; ++i) {
                if (i) spec += ",";
                spec += std::to_string(v);
                v = std::min(max_g, v + pick(rng, 0, 1));
            }
            return WagerSchedule::parse(spec, horizon);
        }
    }
}

CapitalTable random_granular_supermartingale(Rng& rng, const WagerSchedule& g, int64_t depth,
                                             int64_t root_cap) {
    CapitalTable t = CapitalTable::zeros(depth);
    t.at(0, 0) = Dyadic(pick(rng, 0, root_cap << g.eval(0)), g.eval(0));
    constexpr int64_t kUnitCap = int64_t(1) << 40;  // keeps samples in int64 range
    for (int64_t n = 0; n < depth; ++n) {
        int64_t g1 = g.eval(n + 1);
        for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
            Int total = t.at(n, i).exact_quotient_pow2(g1) * 2;
            int64_t cap = total > kUnitCap ? kUnitCap : total.convert_to<int64_t>();
            int64_t a = pick(rng, 0, cap);
            Int rest = total - a;
            int64_t cap_b = rest > kUnitCap ? kUnitCap : rest.convert_to<int64_t>();
            int64_t b = pick(rng, 0, cap_b);
            if (pick(rng, 0, 1)) std::swap(a, b);
            t.at(n + 1, 2 * i) = Dyadic(a, g1);
            t.at(n + 1, 2 * i + 1) = Dyadic(b, g1);
        }
    }
    return t;
}

StagedSupermartingale random_staged(Rng& rng, const WagerSchedule& g, int64_t depth,
                                    int64_t stage_count, bool strongly_granular) {
    StagedSupermartingale s{g, depth, {}};
    std::vector<Dyadic> tail;
    if (!strongly_granular) {
        int64_t len = pick(rng, 0, depth);
        for (int64_t i = 0; i < len; ++i) tail.push_back(Dyadic(pick(rng, 0, 8), pick(rng, 0, 4)));
    }
    CapitalTable hat = random_granular_supermartingale(rng, g, depth, 2);
    for (int64_t j = 0; j < stage_count; ++j) {
        if (j > 0) {
            CapitalTable inc = random_granular_supermartingale(rng, g, depth, 1);
            for (int64_t n = 0; n <= depth; ++n)
                for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
                    hat.at(n, i) = hat.at(n, i) + inc.at(n, i);
        }
        size_t shown = tail.empty() ? 0
                                    : static_cast<size_t>((j + 1) * static_cast<int64_t>(tail.size()) /
                                                          stage_count);
        s.stages.push_back(
            Stage{hat, std::vector<Dyadic>(tail.begin(), tail.begin() + shown)});
    }
    return s;
}

ToyFunctional random_functional(Rng& rng, const WagerSchedule& g, int64_t depth,
                                int64_t density_pct) {
    ToyFunctional f{g, depth, "random", {}};
    f.levels.resize(static_cast<size_t>(depth) + 1);
    for (uint64_t i = 0; i < (uint64_t(1) << g.eval(0)); ++i)
        if (pick(rng, 1, 100) <= density_pct)
            f.levels[0].push_back(FuncEntry{BitString::from_level_index(g.eval(0), i), BitString(), 0});
    for (int64_t n = 0; n < depth; ++n) {
        int64_t ext = (n + 1 + g.eval(n + 1)) - (n + g.eval(n));
        for (const FuncEntry& e : f.levels[static_cast<size_t>(n)]) {
            for (uint64_t i = 0; i < (uint64_t(1) << ext); ++i) {
                if (pick(rng, 1, 100) > density_pct) continue;
                BitString tau = e.tau.concat(BitString::from_level_index(ext, i));
                BitString nu = e.nu.append(static_cast<int>(pick(rng, 0, 1)));
                f.levels[static_cast<size_t>(n) + 1].push_back(FuncEntry{tau, nu, 0});
            }
        }
    }
    std::vector<FuncEntry*> all;
    for (auto& level : f.levels)
        for (FuncEntry& e : level) all.push_back(&e);
    std::shuffle(all.begin(), all.end(), rng);
    for (size_t i = 0; i < all.size(); ++i) all[i]->stamp = static_cast<int64_t>(i) + 1;
    return f;
}

std::vector<KCRequest> random_requests(Rng& rng, int64_t count, int64_t max_length) {
    std::vector<KCRequest> out;
    for (int64_t i = 0; i < count; ++i)
        out.push_back(KCRequest{pick(rng, 0, max_length), "r" + std::to_string(i)});
    return out;
}

ReferenceMachine random_machine(Rng& rng, const ToyFunctional& f, int64_t words) {
    std::vector<BitString> outputs;
    for (const auto& level : f.levels)
        for (const FuncEntry& e : level)
            if (std::find(outputs.begin(), outputs.end(), e.nu) == outputs.end())
                outputs.push_back(e.nu);
    ReferenceMachine r;
    if (outputs.empty()) return r;
    CodeBook book;
    for (int64_t i = 0; i < words; ++i) {
        auto word = book.allocate(pick(rng, 1, 8), "");
        if (!word) break;
        r.table.emplace_back(*word, outputs[static_cast<size_t>(
                                        pick(rng, 0, static_cast<int64_t>(outputs.size()) - 1))]);
    }
    return r;
}

}  // namespace betting
