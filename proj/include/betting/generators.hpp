#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "betting/functional.hpp"
#include "betting/kc.hpp"
#include "betting/machine.hpp"
#include "betting/staged.hpp"

namespace betting {

using Rng = std::mt19937_64;

int64_t pick(Rng& rng, int64_t lo, int64_t hi);  // uniform in [lo, hi]

// A schedule drawn from the grammar (const / linear / log2ceil / table) with
// values capped near max_g, total on [0, horizon].
WagerSchedule random_schedule(Rng& rng, int64_t horizon, int64_t max_g);

// g-granular supermartingale table, built top-down: the children of sigma
// split at most 2 M(sigma), in 2^-g(n+1) units. Root value <= root_cap.
CapitalTable random_granular_supermartingale(Rng& rng, const WagerSchedule& g, int64_t depth,
                                             int64_t root_cap);

// Stage list of cumulative sums of random granular supermartingales, so the
// hats are pointwise nondecreasing and every stage is itself granular and a
// supermartingale. The strong variant has empty tails; otherwise the stages
// expose nondecreasing prefixes of one coefficient list.
StagedSupermartingale random_staged(Rng& rng, const WagerSchedule& g, int64_t depth,
                                    int64_t stage_count, bool strongly_granular);

// Consistent functional built top-down: each level-(n+1) entry extends a
// level-n entry on both sides; density_pct (0..100) controls how many of the
// possible extensions are kept. Stamps are a random permutation of 1..N.
ToyFunctional random_functional(Rng& rng, const WagerSchedule& g, int64_t depth,
                                int64_t density_pct);

std::vector<KCRequest> random_requests(Rng& rng, int64_t count, int64_t max_length);

// Prefix-free machine describing a random subset of the outputs that actually
// occur in f, with random codeword lengths (allocated, hence prefix-free).
ReferenceMachine random_machine(Rng& rng, const ToyFunctional& f, int64_t words);

}  // namespace betting
