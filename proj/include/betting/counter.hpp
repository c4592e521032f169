#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "betting/staged.hpp"

namespace betting {

// One access: at `stage`, the children of `sigma` were rewritten from the
// wager counts t = Mhat(sigma*0)/2^-g(|sigma|+1), q = Mhat(sigma*1)/....
struct AccessEntry {
    int64_t stage = 0;
    BitString sigma;
    Int t, q;
};

struct AccessLog {
    std::vector<AccessEntry> entries;
};

struct CounterRun {
    StagedSupermartingale inputM;
    StagedSupermartingale outputN;  // schedule g+1; stages are checkpoints
                                    // (initial, each input transition, quiescent
                                    // limit); the full stage-by-stage history is
                                    // replayable from the access log
    BitString base;
    BitString path;                 // length = depth, extends base
    AccessLog log;
    std::vector<int64_t> refresh_stages;
    int64_t depth = 0;
    int64_t stages_run = 0;
    bool complete = false;          // quiescence reached within budget
    Report stage_report;            // accumulated per-stage invariant checks
};

// Runs the counterstrategy construction against M rooted at nu0 down to
// `depth`, until a full scan finds no eligible string (or the stage budget is
// hit first, in which case the run is marked incomplete). Per-stage
// supermartingale, monotonicity, (g+1)-granularity and nonnegativity are
// verified online at every stage and summarized in stage_report.
CounterRun run_counter(const StagedSupermartingale& M, const BitString& nu0, int64_t depth,
                       std::optional<int64_t> stage_budget = std::nullopt,
                       bool record_all_stages = false);

// X extending nu0 of length `depth`: each next bit moves to the child where
// Mhat is smaller, ties to 0.
BitString extract_path(const CapitalTable& Mhat, const BitString& nu0, int64_t depth);

// Checks, on the limit tables along run.path, the capital-gap inequality
//   Nhat(X|n) >= Sum_{i<=n} 2^-g(i)-1 + Mhat(X|n)
// and M-boundedness M(X|n) <= M(nu0) (full values, tail included).
Report verify_path_invariant(const CounterRun& run);

struct PathPoint {
    int64_t n;
    Dyadic Nhat;
    Dyadic Mhat;
    int bit = -1;  // bit appended to reach this prefix; -1 at the base
};

// Path-local evaluation of the stabilized construction: Mhat must be a pure
// function of sigma. Visits only path prefixes and their siblings, so it
// scales to depths where the full tree is out of reach. Agrees with
// run_counter limits on overlapping strings.
std::vector<PathPoint> limit_counter_path(const std::function<Dyadic(const BitString&)>& Mhat,
                                          const WagerSchedule& g, const BitString& nu0,
                                          int64_t depth);

}  // namespace betting
