#include <doctest.h>

#include "betting/generators.hpp"
#include "betting/granularize.hpp"
#include "betting/staged.hpp"
#include "betting/table.hpp"

using namespace betting;

namespace {

CapitalTable depth1(const Dyadic& root, const Dyadic& left, const Dyadic& right) {
    CapitalTable t = CapitalTable::zeros(1);
    t.at(BitString("")) = root;
    t.at(BitString("0")) = left;
    t.at(BitString("1")) = right;
    return t;
}

}  // namespace

TEST_SUITE("table") {
    TEST_CASE("dense storage addressed by string or (level, index)") {
        CapitalTable t = CapitalTable::constant(3, Dyadic::one());
        CHECK(t.at(BitString("101")) == Dyadic::one());
        t.at(BitString("101")) = Dyadic(3, 1);
        CHECK(t.at(3, 5) == Dyadic(3, 1));
        CHECK(t.levels.size() == 4);
        CHECK(t.levels[3].size() == 8);
    }

    TEST_CASE("depth guard") {
        CHECK_THROWS_WITH_AS(CapitalTable::zeros(25), "table depth out of range", Error);
        CHECK_THROWS_AS(CapitalTable::zeros(-1), Error);
    }

    TEST_CASE("supermartingale check worked cases") {
        CHECK(check_supermartingale(CapitalTable::constant(3, Dyadic::one())).pass);

        CapitalTable bad = depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::one());
        Report r = check_supermartingale(bad);
        CHECK_FALSE(r.pass);
        CHECK(r.detail == "supermartingale violated at ''");

        CHECK(check_supermartingale(depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero())).pass);
    }

    TEST_CASE("supermartingale check names the least violating node") {
        CapitalTable t = CapitalTable::constant(2, Dyadic::one());
        t.at(BitString("10")) = Dyadic(2, 0);  // breaks the inequality at "1"
        Report r = check_supermartingale(t);
        CHECK_FALSE(r.pass);
        CHECK(r.detail == "supermartingale violated at '1'");
    }

    TEST_CASE("granularity check worked cases") {
        WagerSchedule g0 = WagerSchedule::parse("const:0", 4);
        CapitalTable t = depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero());
        CHECK(check_granularity(t, g0).pass);

        t.at(BitString("0")) = Dyadic(1, 1);
        Report r = check_granularity(t, g0);
        CHECK_FALSE(r.pass);
        CHECK(r.detail.find("'0'") != std::string::npos);

        WagerSchedule lin = WagerSchedule::parse("linear:1:0", 4);
        CapitalTable u = CapitalTable::zeros(2);
        u.at(BitString("11")) = Dyadic(3, 2);  // 3/4 is a multiple of 2^-2
        CHECK(check_granularity(u, lin).pass);
    }

    TEST_CASE("json round trip and totality") {
        CapitalTable t = depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero());
        CHECK(table_from_json(table_to_json(t)) == t);

        json j = table_to_json(t);
        j["values"].erase("1");
        CHECK_THROWS_WITH_AS(table_from_json(j), "incomplete table", Error);

        json k = table_to_json(t);
        k["values"]["00"] = dyadic_to_json(Dyadic::one());
        CHECK_THROWS_AS(table_from_json(k), Error);
    }
}

TEST_SUITE("staged") {
    TEST_CASE("single-stage strongly granular martingale validates") {
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1,
                                {Stage{depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero()), {}}}};
        CHECK(staged_validate(s).pass);
        CHECK(s.strongly_granular());
    }

    TEST_CASE("monotonicity violations name the stage and node") {
        Stage s0{depth1(Dyadic::one(), Dyadic::one(), Dyadic::one()), {}};
        Stage s1 = s0;
        s1.hat.at(BitString("1")) = Dyadic::zero();
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1, {s0, s1}};
        Report r = staged_validate(s);
        CHECK_FALSE(r.pass);
        CHECK(r.detail == "monotonicity at ('1', stage 1)");
    }

    TEST_CASE("per-stage supermartingale violations are caught") {
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1,
                                {Stage{depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::one()), {}}}};
        Report r = staged_validate(s);
        CHECK_FALSE(r.pass);
        CHECK(r.detail.find("supermartingale at ''") == 0);
    }

    TEST_CASE("hat granularity violations are caught") {
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1,
                                {Stage{depth1(Dyadic::one(), Dyadic(1, 1), Dyadic::zero()), {}}}};
        CHECK_FALSE(staged_validate(s).pass);
    }

    TEST_CASE("empty stage list is an error, not a failure") {
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1, {}};
        CHECK_THROWS_WITH_AS(staged_validate(s), "empty stage list", Error);
    }

    TEST_CASE("tails contribute slack, never harm") {
        // Hat is a martingale with equality; the tail adds f(n) - f(n+1) >= 0.
        Stage st{depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero()), {Dyadic(1, 1), Dyadic(1, 2)}};
        CHECK(st.tail_sum(0) == Dyadic(3, 2));
        CHECK(st.tail_sum(1) == Dyadic(1, 2));
        CHECK(st.tail_sum(2) == Dyadic::zero());
        CHECK(st.full(0, 0) == Dyadic(7, 2));
        StagedSupermartingale s{WagerSchedule::parse("const:0", 2), 1, {st}};
        CHECK(staged_validate(s).pass);
        CHECK_FALSE(s.strongly_granular());
    }

    TEST_CASE("tail placement decides the full-value inequality") {
        // Hat alone violates the inequality at the root (2 + 1 > 2). A
        // coefficient at index 0 adds 2 q_0 of slack exactly there and
        // legalizes it; the same coefficient shifted to index 1 adds none.
        CapitalTable hat = depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::one());
        StagedSupermartingale ok{WagerSchedule::parse("const:0", 2), 1,
                                 {Stage{hat, {Dyadic(1, 1)}}}};
        CHECK(staged_validate(ok).pass);
        StagedSupermartingale bad{WagerSchedule::parse("const:0", 2), 1,
                                  {Stage{hat, {Dyadic::zero(), Dyadic(1, 1)}}}};
        CHECK_FALSE(staged_validate(bad).pass);
    }

    TEST_CASE("json round trip") {
        Stage s0{depth1(Dyadic::one(), Dyadic(2, 0), Dyadic::zero()), {Dyadic(1, 1)}};
        Stage s1{depth1(Dyadic(3, 1), Dyadic(2, 0), Dyadic::one()), {Dyadic(1, 1), Dyadic(1, 3)}};
        StagedSupermartingale s{WagerSchedule::parse("table:0,1", 3), 1, {s0, s1}};
        StagedSupermartingale back = staged_from_json(staged_to_json(s));
        CHECK(back.depth == s.depth);
        CHECK(back.stages.size() == 2);
        CHECK(back.stages[0].hat == s.stages[0].hat);
        CHECK(back.stages[1].tail == s.stages[1].tail);
        CHECK(staged_to_json(back) == staged_to_json(s));
    }

    TEST_CASE("random staged generators produce valid instances") {
        Rng rng(23);
        for (int trial = 0; trial < 60; ++trial) {
            WagerSchedule g = random_schedule(rng, 8, 4);
            bool strong = trial % 2 == 0;
            StagedSupermartingale s = random_staged(rng, g, 5, 3, strong);
            CHECK(staged_validate(s).pass);
            if (strong) CHECK(s.strongly_granular());
        }
    }
}

TEST_SUITE("granularize") {
    TEST_CASE("worked root values with the tail starting at the node's own level") {
        // N(lambda) = 1, g = const 1, horizon 2: tail part 3 * 1/2, rounded part
        // S(1, 1/2) = 1/2, so M(lambda) = 2.
        CapitalTable n0 = CapitalTable::constant(0, Dyadic::one());
        GranularizeResult r = granularize(n0, WagerSchedule::parse("const:1", 2), 2);
        CHECK(r.combined.at(BitString("")) == Dyadic(2, 0));
        CHECK(r.hat.at(BitString("")) == Dyadic(1, 1));

        // N(lambda) = 5/8, horizon 1: tail 2 * 1/2, S(5/8, 1/2) = 1/2.
        CapitalTable n1 = CapitalTable::constant(0, Dyadic(5, 3));
        GranularizeResult r1 = granularize(n1, WagerSchedule::parse("const:1", 1), 1);
        CHECK(r1.combined.at(BitString("")) == Dyadic(3, 1));
    }

    TEST_CASE("zero table maps to the bare tail sums") {
        GranularizeResult r = granularize(CapitalTable::zeros(2), WagerSchedule::parse("const:1", 3), 3);
        CHECK(r.combined.at(BitString("")) == Dyadic(2, 0));    // 4 * 1/2
        CHECK(r.combined.at(BitString("0")) == Dyadic(3, 1));   // 3 * 1/2
        CHECK(r.combined.at(BitString("00")) == Dyadic::one());
        CHECK(r.hat.at(BitString("0")) == Dyadic::zero());
    }

    TEST_CASE("uneven schedule step stays a supermartingale") {
        // g jumps from 0 to 2 between levels; the inclusive tail absorbs the
        // rounding loss that an exclusive tail could not.
        CapitalTable n = CapitalTable::constant(1, Dyadic::one());
        GranularizeResult r = granularize(n, WagerSchedule::parse("table:0,2", 1), 1);
        CHECK(r.combined.at(BitString("")) == Dyadic(5, 2));
        CHECK(r.combined.at(BitString("0")) == Dyadic::one());
        CHECK(check_supermartingale(r.combined).pass);
    }

    TEST_CASE("horizon must cover the table") {
        CHECK_THROWS_AS(granularize(CapitalTable::zeros(3), WagerSchedule::parse("const:1", 8), 2),
                        Error);
    }

    TEST_CASE("random tables: predicates and exact sandwich") {
        Rng rng(29);
        WagerSchedule fine = WagerSchedule::parse("const:8", 10);
        for (int trial = 0; trial < 100; ++trial) {
            CapitalTable n = random_granular_supermartingale(rng, fine, 4, 4);
            WagerSchedule g = random_schedule(rng, 10, 4);
            int64_t horizon = 4 + pick(rng, 0, 6);
            GranularizeResult r = granularize(n, g, horizon);

            CHECK(check_supermartingale(r.combined).pass);
            CHECK(check_granularity(r.hat, g).pass);
            CHECK(staged_validate(r.staged(g)).pass);

            // Pointwise: f(n) + N <= M + 2^-g(n) and M <= f(n) + N, exactly.
            for (int64_t lvl = 0; lvl <= n.depth; ++lvl) {
                Dyadic f;
                for (int64_t i = lvl; i <= horizon; ++i) f = f + Dyadic(1, g.eval(i));
                for (uint64_t i = 0; i < (uint64_t(1) << lvl); ++i) {
                    CHECK(f + n.at(lvl, i) <= r.combined.at(lvl, i) + Dyadic(1, g.eval(lvl)));
                    CHECK(r.combined.at(lvl, i) <= f + n.at(lvl, i));
                }
            }
        }
    }
}
