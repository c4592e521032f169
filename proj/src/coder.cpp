#include "betting/coder.hpp"

#include <algorithm>

namespace betting {

HighCapitalSet high_capital_set(const CapitalTable& M, const Dyadic& k) {
    if (k.is_zero()) throw Error("capital threshold must be positive");
    Report sm = check_supermartingale(M);
    if (!sm) throw Error("input fails check_supermartingale: " + sm.detail);
    HighCapitalSet v;
    for (int64_t n = 0; n <= M.depth; ++n) {
        for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
            if (M.at(n, i) < k) continue;
            BitString sigma = BitString::from_level_index(n, i);
            bool covered = false;
            for (const BitString& p : v.strings)
                if (p.is_prefix_of(sigma)) {
                    covered = true;
                    break;
                }
            if (!covered) {
                v.strings.push_back(sigma);
                v.weight = v.weight + Dyadic::pow2(-n);
            }
        }
    }
    if (v.weight * k > M.at(0, 0))
        v.report = Report::fail("weight " + v.weight.str() + " exceeds M(lambda)/k");
    return v;
}

CompressOutcome compress_high_capital(const CapitalTable& M, int64_t c, const Dyadic& k) {
    if (c < 0) throw Error("compression constant must be nonnegative");
    CompressOutcome out;
    out.set = high_capital_set(M, k);
    for (const BitString& sigma : out.set.strings) {
        if (sigma.size() < c) {
            out.reason = "codeword length would be negative at '" + sigma.str() + "'";
            return out;
        }
    }
    out.requested_mass = out.set.weight.scale_pow2(c);
    if (out.requested_mass > Dyadic::one()) {
        out.reason = "requested mass " + out.requested_mass.str() + " exceeds the Kraft bound";
        return out;
    }
    for (const BitString& sigma : out.set.strings) {
        auto word = out.book.allocate(sigma.size() - c, sigma.str());
        if (!word) throw Error("internal error: allocation failed below the Kraft bound");
        out.assignments.emplace_back(sigma, *word);
    }
    out.feasible = true;
    return out;
}

namespace {

// Levels have input length n + g(n), strictly increasing in n, so an input
// length determines its level.
int64_t level_of_input(const ToyFunctional& f, int64_t len) {
    for (int64_t n = 0; n <= f.depth; ++n)
        if (n + f.g.eval(n) == len) return n;
    throw Error("no level with input length " + std::to_string(len));
}

}  // namespace

BitString encode_preimage(const ToyFunctional& f, const ReferenceMachine& r, int64_t d,
                          const BitString& mu) {
    int64_t n = level_of_input(f, mu.size());
    const FuncEntry* hit = nullptr;
    for (const FuncEntry& e : f.levels[static_cast<size_t>(n)])
        if (e.tau == mu) {
            hit = &e;
            break;
        }
    if (!hit) throw Error("the functional is undefined on '" + mu.str() + "'");
    const BitString& nu = hit->nu;
    auto word = shortest_codeword(r, nu);
    if (!word) throw Error("no description");
    std::vector<BitString> q = restricted_enumeration(f, d, nu);
    auto at = std::find(q.begin(), q.end(), mu);
    if (at == q.end()) throw Error("index overflow");
    uint64_t index = static_cast<uint64_t>(at - q.begin());
    int64_t width = f.g.eval(n) + d;
    return word->concat(BitString::from_level_index(width, index));
}

BitString decode_preimage(const ToyFunctional& f, const ReferenceMachine& r, int64_t d,
                          const BitString& code) {
    Report valid = validate_machine(r);
    if (!valid) throw Error("invalid machine: " + valid.detail);
    const std::pair<BitString, BitString>* hit = nullptr;
    for (const auto& entry : r.table)
        if (entry.first.is_prefix_of(code) && (!hit || entry.first.size() < hit->first.size()))
            hit = &entry;
    if (!hit) throw Error("no description");
    const BitString& nu = hit->second;
    if (nu.size() > f.depth) throw Error("described string beyond the functional depth");
    int64_t width = f.g.eval(nu.size()) + d;
    if (code.size() != hit->first.size() + width) throw Error("malformed code");
    uint64_t index = 0;
    for (int64_t i = hit->first.size(); i < code.size(); ++i) index = index * 2 + code.bit(i);
    std::vector<BitString> q = restricted_enumeration(f, d, nu);
    if (index >= q.size()) throw Error("index overflow");
    return q[static_cast<size_t>(index)];
}

}  // namespace betting
