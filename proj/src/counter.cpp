#include "betting/counter.hpp"

#include <algorithm>

namespace betting {

namespace {

// The idealized construction walks stages forever; with a finite stage list
// the input is frozen at its last stage, eligibility is then monotone
// decreasing, and each node is accessed at most once per (t, q) change.
int64_t safety_cap(int64_t depth, int64_t input_stages) {
    return (int64_t(2) << depth) * 2 * (input_stages + 1) + input_stages + depth + 64;
}

struct Engine {
    const StagedSupermartingale& M;
    BitString nu0;
    int64_t D;
    const WagerSchedule& g;
    PartialSums ps;  // halved: Sum_{i<=n} 2^-g(i)-1

    CapitalTable N;
    std::vector<uint64_t> spine_idx;  // level n -> index of nu0's prefix, n < |nu0|
    std::vector<std::vector<uint8_t>> accessed;
    std::vector<std::vector<Int>> lastT, lastQ;
    std::vector<std::vector<uint8_t>> chain;
    CapitalTable cond_rhs;  // Mhat_old + partial sum, refreshed per input stage
    int64_t rhs_stage = -1;

    CounterRun run;

    Engine(const StagedSupermartingale& m, BitString base, int64_t depth)
        : M(m), nu0(std::move(base)), D(depth), g(m.g), ps(m.g, true), N(CapitalTable::zeros(depth)) {
        for (int64_t n = 0; n < nu0.size(); ++n) spine_idx.push_back(nu0.prefix(n).level_index());
        accessed.resize(static_cast<size_t>(D));
        lastT.resize(static_cast<size_t>(D));
        lastQ.resize(static_cast<size_t>(D));
        chain.resize(static_cast<size_t>(D));
        for (int64_t n = 0; n < D; ++n) {
            accessed[static_cast<size_t>(n)].assign(size_t(1) << n, 0);
            lastT[static_cast<size_t>(n)].resize(size_t(1) << n);
            lastQ[static_cast<size_t>(n)].resize(size_t(1) << n);
            chain[static_cast<size_t>(n)].assign(size_t(1) << n, 0);
        }
        cond_rhs = CapitalTable::zeros(depth);
    }

    const Stage& input(int64_t s) const {
        return M.stages[static_cast<size_t>(
            std::min<int64_t>(s, static_cast<int64_t>(M.stages.size()) - 1))];
    }

    void fail(const std::string& what) {
        if (run.stage_report.pass) run.stage_report = Report::fail(what);
    }

    void refresh_cond_rhs(int64_t s) {
        if (rhs_stage == s) return;
        rhs_stage = s;
        const CapitalTable& hat = input(s).hat;
        for (int64_t n = 0; n < D; ++n)
            for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
                cond_rhs.at(n, i) = hat.at(n, i) + ps.upto(n);
    }

    // The base clause pins every eta <= nu0 to Mhat(eta) + Sum_{i<=|eta|} 2^-g(i)-1,
    // so the eligibility condition holds along the spine with equality.
    void set_spine(int64_t input_stage, int64_t at_stage) {
        const CapitalTable& hat = input(input_stage).hat;
        for (int64_t n = 0; n <= nu0.size(); ++n) {
            BitString eta = nu0.prefix(n);
            Dyadic v = hat.at(eta) + ps.upto(n);
            if (v < N.at(eta))
                fail("monotonicity at ('" + eta.str() + "', stage " + std::to_string(at_stage) + ")");
            if (!v.is_multiple_of_pow2(g.eval(n) + 1))
                fail("granularity at '" + eta.str() + "' (stage " + std::to_string(at_stage) + ")");
            N.at(eta) = v;
        }
    }

    bool spine_changed(int64_t s_old, int64_t s_new) const {
        if (s_old == s_new) return false;
        const CapitalTable& a = input(s_old).hat;
        const CapitalTable& b = input(s_new).hat;
        for (int64_t n = 0; n <= nu0.size(); ++n) {
            BitString eta = nu0.prefix(n);
            if (a.at(eta) != b.at(eta)) return true;
        }
        return false;
    }

    // Full-value supermartingale check of the triple rooted at (n, i) against
    // the given stage's tail. Values other than the two children of an access
    // only ever grow, which preserves the inequality at all other triples.
    void check_triple(int64_t n, uint64_t i, const Stage& st, int64_t at_stage) {
        Dyadic fc = st.tail_sum(n + 1);
        Dyadic lhs = N.at(n + 1, 2 * i) + N.at(n + 1, 2 * i + 1) + fc + fc;
        Dyadic fp = st.tail_sum(n);
        Dyadic rhs = N.at(n, i) + N.at(n, i) + fp + fp;
        if (lhs > rhs)
            fail("supermartingale at '" + BitString::from_level_index(n, i).str() + "' (stage " +
                 std::to_string(at_stage) + ")");
    }

    void record_checkpoint(int64_t input_stage) {
        run.outputN.stages.push_back(Stage{N, input(input_stage).tail});
    }

    struct Found {
        int64_t level;
        uint64_t index;
        Int t, q;
    };

    // One ordered scan: chain(sigma) = chain(parent) && cond(sigma), scanning
    // levels in order and each level lexicographically, so the first hit is the
    // length-lex least eligible string.
    std::optional<Found> sweep(int64_t s_old, int64_t s_new, int64_t cap) {
        refresh_cond_rhs(s_old);
        const CapitalTable& next_hat = input(s_new).hat;
        for (int64_t n = 0; n <= std::min(cap, D - 1); ++n) {
            bool any = false;
            for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
                bool ok = (n == 0 || chain[static_cast<size_t>(n) - 1][i >> 1]) &&
                          N.at(n, i) >= cond_rhs.at(n, i);
                chain[static_cast<size_t>(n)][i] = ok;
                if (!ok) continue;
                any = true;
                // Strings strictly above the base are chain links only: their
                // on-spine child is maintained by the refresh rule, never by an
                // access, so they are not candidates.
                if (n < nu0.size() && i == spine_idx[static_cast<size_t>(n)]) continue;
                int64_t g1 = g.eval(n + 1);
                Int t = next_hat.at(n + 1, 2 * i).exact_quotient_pow2(g1);
                Int q = next_hat.at(n + 1, 2 * i + 1).exact_quotient_pow2(g1);
                if (!accessed[static_cast<size_t>(n)][i] ||
                    t != lastT[static_cast<size_t>(n)][i] || q != lastQ[static_cast<size_t>(n)][i])
                    return Found{n, i, std::move(t), std::move(q)};
            }
            if (!any) break;  // no eligible chain can extend below an empty level
        }
        return std::nullopt;
    }

    void access(const Found& f, int64_t stage, int64_t s_new) {
        int64_t n1 = f.level + 1;
        int64_t g1 = g.eval(n1);
        Dyadic unit(1, g1);
        Dyadic half(1, g1 + 1);
        Dyadic base = ps.upto(f.level);
        Dyadic c0 = base + unit * f.q + half;
        Dyadic c1;
        try {
            c1 = base + unit * f.t - half;
        } catch (const Error&) {
            fail("negative capital at '" +
                 BitString::from_level_index(n1, 2 * f.index + 1).str() + "' (stage " +
                 std::to_string(stage) + ")");
            return;
        }
        if (c0 < N.at(n1, 2 * f.index) || c1 < N.at(n1, 2 * f.index + 1))
            fail("monotonicity at ('" + BitString::from_level_index(f.level, f.index).str() +
                 "' children, stage " + std::to_string(stage) + ")");
        if (!c0.is_multiple_of_pow2(g1 + 1) || !c1.is_multiple_of_pow2(g1 + 1))
            fail("granularity at '" + BitString::from_level_index(f.level, f.index).str() +
                 "' children (stage " + std::to_string(stage) + ")");
        N.at(n1, 2 * f.index) = c0;
        N.at(n1, 2 * f.index + 1) = c1;
        accessed[static_cast<size_t>(f.level)][f.index] = 1;
        lastT[static_cast<size_t>(f.level)][f.index] = f.t;
        lastQ[static_cast<size_t>(f.level)][f.index] = f.q;
        run.log.entries.push_back(
            AccessEntry{stage, BitString::from_level_index(f.level, f.index), f.t, f.q});
        check_triple(f.level, f.index, input(s_new), stage);
    }
};

}  // namespace

CounterRun run_counter(const StagedSupermartingale& M, const BitString& nu0, int64_t depth,
                       std::optional<int64_t> stage_budget, bool record_all_stages) {
    Report valid = staged_validate(M);
    if (!valid) throw Error("input fails staged_validate: " + valid.detail);
    if (nu0.size() >= depth) throw Error("base string must be shorter than the depth");
    if (M.depth < depth) throw Error("input depth smaller than requested run depth");
    if (M.g.horizon() < depth) throw Error("schedule exhausted");
    // Tail coefficients must stay frozen once enumerated; stagewise this
    // means per-index nondecreasing lists, which keeps every already-verified
    // supermartingale triple valid when the tail advances.
    for (size_t s = 1; s < M.stages.size(); ++s) {
        const auto& prev = M.stages[s - 1].tail;
        const auto& cur = M.stages[s].tail;
        if (cur.size() < prev.size())
            throw Error("input tail lists must not shrink across stages");
        for (size_t i = 0; i < prev.size(); ++i)
            if (cur[i] < prev[i]) throw Error("input tail coefficients must be stagewise nondecreasing");
    }

    Engine e(M, nu0, depth);
    e.run.inputM = M;
    e.run.base = nu0;
    e.run.depth = depth;
    e.run.outputN.g = M.g.successor();
    e.run.outputN.depth = depth;

    int64_t input_stages = static_cast<int64_t>(M.stages.size());
    e.set_spine(0, 0);
    for (int64_t n = 0; n < nu0.size(); ++n) e.check_triple(n, nu0.prefix(n).level_index(), M.stages[0], 0);
    e.record_checkpoint(0);

    int64_t cap_stages = stage_budget ? *stage_budget : safety_cap(depth, input_stages);
    int64_t s = 0;
    bool quiescent = false;
    while (s < cap_stages) {
        int64_t stage = s + 1;
        int64_t s_old = std::min(s, input_stages - 1);
        int64_t s_new = std::min(stage, input_stages - 1);

        if (e.spine_changed(s_old, s_new)) {
            e.set_spine(s_new, stage);
            for (int64_t n = 0; n < nu0.size(); ++n)
                e.check_triple(n, nu0.prefix(n).level_index(), M.stages[static_cast<size_t>(s_new)], stage);
            e.run.refresh_stages.push_back(stage);
        } else {
            auto found = e.sweep(s_old, s_new, std::min(s, depth - 1));
            if (found) {
                e.access(*found, stage, s_new);
            } else if (s >= input_stages - 1 && s >= depth - 1) {
                quiescent = true;
            }
        }
        s = stage;
        if (record_all_stages || s_new != s_old) e.record_checkpoint(s_new);
        if (quiescent || !e.run.stage_report.pass) break;
    }

    e.run.stages_run = s;
    e.run.complete = quiescent;
    if (!stage_budget && !quiescent && e.run.stage_report.pass)
        throw Error("internal error: safety cap hit before quiescence");
    if (!record_all_stages || e.run.outputN.stages.empty())
        e.record_checkpoint(std::min(s, input_stages - 1));
    e.run.path = extract_path(e.M.limit().hat, nu0, depth);
    return e.run;
}

BitString extract_path(const CapitalTable& Mhat, const BitString& nu0, int64_t depth) {
    if (Mhat.depth < depth) throw Error("incomplete table");
    if (nu0.size() > depth) throw Error("base string longer than the depth");
    BitString x = nu0;
    for (int64_t n = nu0.size(); n < depth; ++n)
        x = x.append(Mhat.at(x.append(0)) <= Mhat.at(x.append(1)) ? 0 : 1);
    return x;
}

Report verify_path_invariant(const CounterRun& run) {
    if (!run.complete) return Report::fail("run is incomplete");
    const CapitalTable& Nhat = run.outputN.limit().hat;
    const Stage& Mfinal = run.inputM.limit();
    PartialSums ps(run.inputM.g, true);
    Dyadic bound = Mfinal.full(run.base.size(), run.base.level_index());
    for (int64_t n = run.base.size(); n <= run.depth; ++n) {
        BitString x = run.path.prefix(n);
        if (Nhat.at(x) < ps.upto(n) + Mfinal.hat.at(x))
            return Report::fail("capital gap fails at n=" + std::to_string(n));
        if (Mfinal.full(n, x.level_index()) > bound)
            return Report::fail("M-boundedness fails at n=" + std::to_string(n));
    }
    return Report::ok();
}

std::vector<PathPoint> limit_counter_path(const std::function<Dyadic(const BitString&)>& Mhat,
                                          const WagerSchedule& g, const BitString& nu0,
                                          int64_t depth) {
    if (nu0.size() > depth) throw Error("base string longer than the depth");
    if (g.horizon() < depth) throw Error("schedule exhausted");
    PartialSums ps(g, true);
    std::vector<PathPoint> out;
    BitString x = nu0;
    Dyadic m = Mhat(x);
    Dyadic nh = m + ps.upto(x.size());
    out.push_back(PathPoint{x.size(), nh, m, -1});
    for (int64_t n = nu0.size(); n < depth; ++n) {
        Dyadic m0 = Mhat(x.append(0));
        Dyadic m1 = Mhat(x.append(1));
        int64_t g1 = g.eval(n + 1);
        Int t = m0.exact_quotient_pow2(g1);
        Int q = m1.exact_quotient_pow2(g1);
        Dyadic unit(1, g1);
        Dyadic half(1, g1 + 1);
        int bit = m0 <= m1 ? 0 : 1;
        nh = bit == 0 ? ps.upto(n) + unit * q + half : ps.upto(n) + unit * t - half;
        x = x.append(bit);
        m = bit == 0 ? m0 : m1;
        out.push_back(PathPoint{n + 1, nh, m, bit});
    }
    return out;
}

}  // namespace betting
