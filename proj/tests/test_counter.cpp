#include <doctest.h>

#include <algorithm>
#include <map>

#include "betting/counter.hpp"
#include "betting/generators.hpp"

using namespace betting;

namespace {

CapitalTable table_of(int64_t depth, std::map<std::string, Dyadic> vals) {
    CapitalTable t = CapitalTable::zeros(depth);
    for (auto& [k, v] : vals) t.at(BitString(k)) = v;
    return t;
}

StagedSupermartingale single(const std::string& spec, int64_t horizon, CapitalTable hat) {
    return StagedSupermartingale{WagerSchedule::parse(spec, horizon), hat.depth,
                                 {Stage{std::move(hat), {}}}};
}

// Replays a record_all_stages run from its access log and refresh list: every
// internal stage may rewrite the spine (refresh), the two children of the one
// logged string (access), or nothing; all other entries must carry over.
void check_replay(const CounterRun& run) {
    std::map<int64_t, AccessEntry> by_stage;
    for (const auto& e : run.log.entries) {
        CHECK(by_stage.emplace(e.stage, e).second);  // at most one access per stage
    }
    PartialSums ps(run.inputM.g, true);
    for (size_t s = 1; s < run.outputN.stages.size(); ++s) {
        const CapitalTable& prev = run.outputN.stages[s - 1].hat;
        const CapitalTable& cur = run.outputN.stages[s].hat;
        int64_t stage = static_cast<int64_t>(s);
        bool refresh = std::find(run.refresh_stages.begin(), run.refresh_stages.end(), stage) !=
                       run.refresh_stages.end();
        auto logged = by_stage.find(stage);
        for (int64_t n = 0; n <= run.depth; ++n) {
            for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
                BitString here = BitString::from_level_index(n, i);
                bool on_spine = here.is_prefix_of(run.base);
                bool is_child = logged != by_stage.end() && n == logged->second.sigma.size() + 1 &&
                                logged->second.sigma.is_prefix_of(here);
                if (refresh && on_spine) continue;  // rewritten from the input hat
                if (!refresh && is_child) {
                    int64_t g1 = run.inputM.g.eval(n);
                    Dyadic base = ps.upto(n - 1);
                    Dyadic expect = here.bit(n - 1) == 0
                                        ? base + Dyadic(1, g1) * logged->second.q + Dyadic(1, g1 + 1)
                                        : base + Dyadic(1, g1) * logged->second.t - Dyadic(1, g1 + 1);
                    CHECK(cur.at(n, i) == expect);
                    continue;
                }
                CHECK(cur.at(n, i) == prev.at(n, i));
            }
        }
    }
}

// Total (t, q) coefficient changes across consecutive input stages, over all
// strings shorter than the run depth.
int64_t coefficient_changes(const StagedSupermartingale& m, int64_t depth) {
    int64_t changes = 0;
    for (size_t s = 1; s < m.stages.size(); ++s)
        for (int64_t n = 0; n + 1 <= depth; ++n)
            for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
                if (m.stages[s].hat.at(n + 1, 2 * i) != m.stages[s - 1].hat.at(n + 1, 2 * i) ||
                    m.stages[s].hat.at(n + 1, 2 * i + 1) != m.stages[s - 1].hat.at(n + 1, 2 * i + 1))
                    ++changes;
    return changes;
}

}  // namespace

TEST_SUITE("counter") {
    TEST_CASE("single-stage worked run: update equations, path, gap") {
        StagedSupermartingale m = single(
            "const:0", 2, table_of(1, {{"", Dyadic::one()}, {"0", Dyadic(2, 0)}, {"1", Dyadic::zero()}}));
        CounterRun run = run_counter(m, BitString(""), 1);

        CHECK(run.complete);
        CHECK(run.stage_report.pass);
        const CapitalTable& nhat = run.outputN.limit().hat;
        CHECK(nhat.at(BitString("")) == Dyadic(3, 1));   // Mhat + 2^-g(0)-1
        CHECK(nhat.at(BitString("0")) == Dyadic::one()); // 1/2 + q + 1/2
        CHECK(nhat.at(BitString("1")) == Dyadic(2, 0));  // 1/2 + t - 1/2
        CHECK(nhat.at(BitString("0")) + nhat.at(BitString("1")) ==
              nhat.at(BitString("")) + nhat.at(BitString("")));

        REQUIRE(run.log.entries.size() == 1);
        CHECK(run.log.entries[0].sigma == BitString(""));
        CHECK(run.log.entries[0].t == 2);
        CHECK(run.log.entries[0].q == 0);

        CHECK(run.path == BitString("1"));  // Mhat(0) = 2 > Mhat(1) = 0
        CHECK(run.refresh_stages.empty());
        CHECK(verify_path_invariant(run).pass);
        CHECK(run.outputN.g.offset() == 1);
        CHECK(staged_validate(run.outputN).pass);
        CHECK(run.outputN.strongly_granular());
    }

    TEST_CASE("perturbed output fails the gap check at the right level") {
        StagedSupermartingale m = single(
            "const:0", 2, table_of(1, {{"", Dyadic::one()}, {"0", Dyadic(2, 0)}, {"1", Dyadic::zero()}}));
        CounterRun run = run_counter(m, BitString(""), 1);
        run.outputN.stages.back().hat.at(BitString("1")) = Dyadic(1, 1);
        Report r = verify_path_invariant(run);
        CHECK_FALSE(r.pass);
        CHECK(r.detail == "capital gap fails at n=1");
    }

    TEST_CASE("two-stage run: root refresh, then accesses against the new table") {
        CapitalTable s0 = table_of(2, {{"", Dyadic::one()},
                                       {"0", Dyadic(2, 0)},
                                       {"1", Dyadic::zero()},
                                       {"00", Dyadic(4, 0)}});
        CapitalTable s1 = table_of(2, {{"", Dyadic(2, 0)},
                                       {"0", Dyadic(2, 0)},
                                       {"1", Dyadic(2, 0)},
                                       {"00", Dyadic(4, 0)},
                                       {"10", Dyadic(2, 0)},
                                       {"11", Dyadic(2, 0)}});
        StagedSupermartingale m{WagerSchedule::parse("const:0", 3), 2,
                                {Stage{s0, {}}, Stage{s1, {}}}};
        CounterRun run = run_counter(m, BitString(""), 2, std::nullopt, true);

        CHECK(run.complete);
        CHECK(run.stage_report.pass);
        CHECK(run.refresh_stages == std::vector<int64_t>{1});

        REQUIRE(run.log.entries.size() == 2);
        CHECK(run.log.entries[0].stage == 2);
        CHECK(run.log.entries[0].sigma == BitString(""));
        CHECK(run.log.entries[0].t == 2);
        CHECK(run.log.entries[0].q == 2);
        CHECK(run.log.entries[1].stage == 3);
        CHECK(run.log.entries[1].sigma == BitString("0"));
        CHECK(run.log.entries[1].t == 4);
        CHECK(run.log.entries[1].q == 0);

        const CapitalTable& nhat = run.outputN.limit().hat;
        CHECK(nhat.at(BitString("")) == Dyadic(5, 1));
        CHECK(nhat.at(BitString("0")) == Dyadic(3, 0));
        CHECK(nhat.at(BitString("1")) == Dyadic(2, 0));
        CHECK(nhat.at(BitString("00")) == Dyadic(3, 1));
        CHECK(nhat.at(BitString("01")) == Dyadic(9, 1));

        CHECK(run.path == BitString("01"));
        CHECK(verify_path_invariant(run).pass);
        CHECK(staged_validate(run.outputN).pass);
        CHECK(run.outputN.stages.size() == 5);  // initial + four internal stages
        check_replay(run);
    }

    TEST_CASE("re-access happens exactly when the wager counts change") {
        auto hat = [](int64_t left, int64_t right) {
            return table_of(1, {{"", Dyadic(4, 0)},
                                {"0", Dyadic(left, 0)},
                                {"1", Dyadic(right, 0)}});
        };
        StagedSupermartingale m{WagerSchedule::parse("const:0", 2), 1,
                                {Stage{hat(0, 0), {}}, Stage{hat(2, 0), {}}, Stage{hat(2, 2), {}}}};
        CounterRun run = run_counter(m, BitString(""), 1);

        REQUIRE(run.log.entries.size() == 2);
        CHECK(run.log.entries[0].sigma == BitString(""));
        CHECK(run.log.entries[0].t == 2);
        CHECK(run.log.entries[0].q == 0);
        CHECK(run.log.entries[1].sigma == BitString(""));
        CHECK(run.log.entries[1].t == 2);
        CHECK(run.log.entries[1].q == 2);
        const CapitalTable& nhat = run.outputN.limit().hat;
        CHECK(nhat.at(BitString("0")) == Dyadic(3, 0));
        CHECK(nhat.at(BitString("1")) == Dyadic(2, 0));
        CHECK(verify_path_invariant(run).pass);
    }

    TEST_CASE("base above the root: spine stays pinned, siblings stay empty") {
        CapitalTable s0 = table_of(2, {{"", Dyadic(2, 0)},
                                       {"0", Dyadic::one()},
                                       {"1", Dyadic::one()},
                                       {"00", Dyadic(2, 0)},
                                       {"10", Dyadic::one()},
                                       {"11", Dyadic::one()}});
        CapitalTable s1 = table_of(2, {{"", Dyadic(2, 0)},
                                       {"0", Dyadic(2, 0)},
                                       {"1", Dyadic::one()},
                                       {"00", Dyadic(4, 0)},
                                       {"10", Dyadic::one()},
                                       {"11", Dyadic::one()}});
        StagedSupermartingale m{WagerSchedule::parse("const:0", 3), 2,
                                {Stage{s0, {}}, Stage{s1, {}}}};
        CounterRun run = run_counter(m, BitString("0"), 2);

        CHECK(run.complete);
        CHECK(run.refresh_stages == std::vector<int64_t>{1});
        REQUIRE(run.log.entries.size() == 1);
        CHECK(run.log.entries[0].sigma == BitString("0"));

        const CapitalTable& nhat = run.outputN.limit().hat;
        // The root is a chain link, never an access candidate: its children keep
        // the pinned spine value Mhat + partial sum on one side and zero off it.
        CHECK(nhat.at(BitString("")) == Dyadic(5, 1));
        CHECK(nhat.at(BitString("0")) == Dyadic(3, 0));
        CHECK(nhat.at(BitString("1")) == Dyadic::zero());
        CHECK(nhat.at(BitString("00")) == Dyadic(3, 1));
        CHECK(nhat.at(BitString("01")) == Dyadic(9, 1));
        CHECK(nhat.at(BitString("10")) == Dyadic::zero());

        CHECK(run.path == BitString("01"));
        CHECK(verify_path_invariant(run).pass);
    }

    TEST_CASE("stage budget exhaustion marks the run incomplete") {
        StagedSupermartingale m = single(
            "const:0", 2, table_of(1, {{"", Dyadic::one()}, {"0", Dyadic(2, 0)}, {"1", Dyadic::zero()}}));
        CounterRun run = run_counter(m, BitString(""), 1, 1);
        CHECK_FALSE(run.complete);
        CHECK(run.stages_run == 1);
        CHECK(run.stage_report.pass);  // nothing failed, the budget just ran out
        Report r = verify_path_invariant(run);
        CHECK_FALSE(r.pass);
        CHECK(r.detail == "run is incomplete");
    }

    TEST_CASE("input preconditions") {
        StagedSupermartingale m = single(
            "const:0", 2, table_of(1, {{"", Dyadic::one()}, {"0", Dyadic(2, 0)}, {"1", Dyadic::zero()}}));
        CHECK_THROWS_AS(run_counter(m, BitString("0"), 1), Error);   // base not shorter
        CHECK_THROWS_AS(run_counter(m, BitString(""), 2), Error);    // table too shallow
        StagedSupermartingale bad = m;
        bad.stages[0].hat.at(BitString("1")) = Dyadic(2, 0);
        CHECK_THROWS_AS(run_counter(bad, BitString(""), 1), Error);  // fails validation

        StagedSupermartingale shrink{WagerSchedule::parse("const:0", 2), 1,
                                     {Stage{CapitalTable::constant(1, Dyadic::one()), {Dyadic::one()}},
                                      Stage{CapitalTable::constant(1, Dyadic::one()), {}}}};
        CHECK_THROWS_WITH_AS(run_counter(shrink, BitString(""), 1),
                             "input tail lists must not shrink across stages", Error);

        StagedSupermartingale drop{WagerSchedule::parse("const:0", 2), 1,
                                   {Stage{CapitalTable::constant(1, Dyadic::one()), {Dyadic::one()}},
                                    Stage{CapitalTable::constant(1, Dyadic::one()), {Dyadic(1, 1)}}}};
        CHECK_THROWS_WITH_AS(run_counter(drop, BitString(""), 1),
                             "input tail coefficients must be stagewise nondecreasing", Error);
    }

    TEST_CASE("random strongly granular inputs satisfy every invariant") {
        Rng rng(31);
        for (int trial = 0; trial < 80; ++trial) {
            int64_t depth = pick(rng, 1, 6);
            WagerSchedule g = random_schedule(rng, depth + 2, 3);
            StagedSupermartingale m = random_staged(rng, g, depth, pick(rng, 1, 3), true);
            int64_t blen = pick(rng, 0, depth - 1);
            BitString base = BitString::from_level_index(
                blen, static_cast<uint64_t>(pick(rng, 0, (int64_t(1) << blen) - 1)));

            CounterRun run = run_counter(m, base, depth, std::nullopt, true);
            CHECK(run.complete);
            CHECK(run.stage_report.pass);
            CHECK(run.path.size() == depth);
            CHECK(base.is_prefix_of(run.path));
            CHECK(staged_validate(run.outputN).pass);
            CHECK(run.outputN.strongly_granular());
            CHECK(verify_path_invariant(run).pass);
            check_replay(run);

            // Pinned spine and untouched off-cone region in the limit.
            const CapitalTable& nhat = run.outputN.limit().hat;
            const CapitalTable& mhat = m.limit().hat;
            PartialSums ps(m.g, true);
            for (int64_t n = 0; n <= base.size(); ++n) {
                BitString eta = base.prefix(n);
                CHECK(nhat.at(eta) == mhat.at(eta) + ps.upto(n));
            }
            for (int64_t n = 0; n <= depth; ++n)
                for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
                    BitString s = BitString::from_level_index(n, i);
                    if (!s.is_prefix_of(base) && !base.is_prefix_of(s))
                        CHECK(nhat.at(n, i) == Dyadic::zero());
                }

            // Determinism and the access bound.
            CounterRun again = run_counter(m, base, depth, std::nullopt, true);
            CHECK(again.outputN.limit().hat == nhat);
            REQUIRE(again.log.entries.size() == run.log.entries.size());
            for (size_t i = 0; i < run.log.entries.size(); ++i) {
                CHECK(again.log.entries[i].stage == run.log.entries[i].stage);
                CHECK(again.log.entries[i].sigma == run.log.entries[i].sigma);
                CHECK(again.log.entries[i].t == run.log.entries[i].t);
                CHECK(again.log.entries[i].q == run.log.entries[i].q);
            }
            int64_t strings_below = (int64_t(1) << depth) - 1;
            CHECK(static_cast<int64_t>(run.log.entries.size()) <=
                  strings_below * (1 + coefficient_changes(m, depth)));
        }
    }

    TEST_CASE("tailed inputs run to quiescence with valid output") {
        Rng rng(37);
        for (int trial = 0; trial < 40; ++trial) {
            int64_t depth = pick(rng, 1, 5);
            WagerSchedule g = random_schedule(rng, depth + 2, 3);
            StagedSupermartingale m = random_staged(rng, g, depth, pick(rng, 2, 4), false);
            CounterRun run = run_counter(m, BitString(""), depth);
            CHECK(run.complete);
            CHECK(run.stage_report.pass);
            CHECK(staged_validate(run.outputN).pass);
            CHECK(verify_path_invariant(run).pass);
        }
    }
}

TEST_SUITE("extract_path") {
    TEST_CASE("moves toward the smaller child, ties to zero") {
        CapitalTable t = table_of(2, {{"", Dyadic::one()},
                                      {"0", Dyadic(2, 0)},
                                      {"00", Dyadic(2, 0)},
                                      {"01", Dyadic(2, 0)}});
        CHECK(extract_path(t, BitString(""), 2) == BitString("10"));
        CHECK(extract_path(CapitalTable::constant(3, Dyadic::one()), BitString(""), 3) ==
              BitString("000"));
        CHECK(extract_path(CapitalTable::constant(3, Dyadic::one()), BitString("11"), 3) ==
              BitString("110"));
        CHECK(extract_path(t, BitString("01"), 2) == BitString("01"));
    }

    TEST_CASE("errors") {
        CapitalTable t = CapitalTable::constant(2, Dyadic::one());
        CHECK_THROWS_WITH_AS(extract_path(t, BitString(""), 3), "incomplete table", Error);
        CHECK_THROWS_AS(extract_path(t, BitString("000"), 2), Error);
    }
}

TEST_SUITE("lazy mode") {
    TEST_CASE("agrees with the staged engine on the worked two-stage run") {
        CapitalTable s0 = table_of(2, {{"", Dyadic::one()},
                                       {"0", Dyadic(2, 0)},
                                       {"1", Dyadic::zero()},
                                       {"00", Dyadic(4, 0)}});
        CapitalTable s1 = table_of(2, {{"", Dyadic(2, 0)},
                                       {"0", Dyadic(2, 0)},
                                       {"1", Dyadic(2, 0)},
                                       {"00", Dyadic(4, 0)},
                                       {"10", Dyadic(2, 0)},
                                       {"11", Dyadic(2, 0)}});
        StagedSupermartingale m{WagerSchedule::parse("const:0", 3), 2,
                                {Stage{s0, {}}, Stage{s1, {}}}};
        CounterRun run = run_counter(m, BitString(""), 2);

        auto pure = [&](const BitString& s) { return s1.at(s); };
        auto points = limit_counter_path(pure, m.g, BitString(""), 2);
        REQUIRE(points.size() == 3);
        CHECK(points[0].bit == -1);
        const CapitalTable& nhat = run.outputN.limit().hat;
        BitString x;
        for (const auto& p : points) {
            if (p.bit >= 0) x = x.append(p.bit);
            CHECK(p.n == x.size());
            CHECK(p.Nhat == nhat.at(x));
            CHECK(p.Mhat == s1.at(x));
        }
        CHECK(x == run.path);
    }

    TEST_CASE("agreement on random stabilized inputs") {
        Rng rng(41);
        for (int trial = 0; trial < 40; ++trial) {
            int64_t depth = pick(rng, 1, 6);
            WagerSchedule g = random_schedule(rng, depth + 2, 3);
            CapitalTable hat = random_granular_supermartingale(rng, g, depth, 4);
            StagedSupermartingale m{g, depth, {Stage{hat, {}}}};
            CounterRun run = run_counter(m, BitString(""), depth);
            auto points = limit_counter_path([&](const BitString& s) { return hat.at(s); }, g,
                                             BitString(""), depth);
            REQUIRE(points.size() == static_cast<size_t>(depth) + 1);
            BitString x;
            for (const auto& p : points) {
                if (p.bit >= 0) x = x.append(p.bit);
                CHECK(p.Nhat == run.outputN.limit().hat.at(x));
            }
            CHECK(x == run.path);
        }
    }

    TEST_CASE("base-only when depth equals the base length") {
        auto one = [](const BitString&) { return Dyadic::one(); };
        WagerSchedule g = WagerSchedule::parse("const:1", 4);
        auto points = limit_counter_path(one, g, BitString("10"), 2);
        REQUIRE(points.size() == 1);
        CHECK(points[0].n == 2);
        CHECK(points[0].bit == -1);
        CHECK(points[0].Mhat == Dyadic::one());
        CHECK(points[0].Nhat == Dyadic::one() + g.partial_sum(2, true));
    }

    TEST_CASE("constant martingale gains exactly the halved partial sums") {
        WagerSchedule g = WagerSchedule::parse("log2ceil:1", 8);
        auto one = [](const BitString&) { return Dyadic::one(); };
        auto points = limit_counter_path(one, g, BitString(""), 6);
        PartialSums ps(g, true);
        for (const auto& p : points) {
            CHECK(p.Mhat == Dyadic::one());
            CHECK(p.Nhat == Dyadic::one() + ps.upto(p.n));
            CHECK(p.bit <= 0);  // all ties, resolved to zero past the base
        }
        CHECK(points.back().Nhat - points.back().Mhat == Dyadic(3, 2));
    }
}
