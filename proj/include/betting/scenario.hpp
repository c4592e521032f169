#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "betting/coder.hpp"
#include "betting/counter.hpp"
#include "betting/functional.hpp"
#include "betting/json_util.hpp"
#include "betting/machine.hpp"
#include "betting/report.hpp"
#include "betting/schedule.hpp"

namespace betting {

// Self-contained run documents: {"scenario", "inputs", "outputs", "summary"}.
// Inputs are embedded, outputs are rebuilt deterministically, so a trace
// validates by re-running the scenario and comparing documents bit for bit.

json counter_trace(const CounterRun& run);

// Path-local run against the constant martingale; the capital along the path
// must equal the constant plus the accumulated gain Sum_{i<=n} 2^-g(i)-1.
json lazy_counter_trace(const WagerSchedule& g, const Dyadic& constant, const BitString& nu0,
                        int64_t depth);

// Side-by-side gain curves. The divergent schedule must cross every requested
// threshold within the depth; the convergent one (log2ceil:m, m >= 2) stays
// strictly below 1/4, re-derived by exact grouped sums.
json scenario_divergence_gap(const WagerSchedule& g_div, const WagerSchedule& g_conv,
                             int64_t depth, const std::vector<Dyadic>& thresholds);

// Searches extensions nu of nu0 — counterstrategy-guided path first, then all
// extensions in length-lex order — for one whose every preimage receives a
// two-part code of length at most |mu| - c. Every certificate entry is
// re-verified by decoding before it is emitted.
json scenario_density(const ToyFunctional& f, const ReferenceMachine& r, int64_t c, int64_t d,
                      const BitString& nu0, int64_t depth);

void emit_trace(const json& trace, const std::string& path);

// Re-runs the named scenario on the embedded inputs and compares the rebuilt
// document with the stored one; any edit shows up as a mismatch.
Report validate_trace(const json& trace);

}  // namespace betting
