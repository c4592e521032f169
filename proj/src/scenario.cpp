#include "betting/scenario.hpp"

#include <algorithm>
#include <bit>

#include "betting/staged.hpp"

namespace betting {

namespace {

json envelope(const std::string& scenario, json inputs, json outputs, const Report& summary) {
    return {{"scenario", scenario},
            {"inputs", std::move(inputs)},
            {"outputs", std::move(outputs)},
            {"summary", {{"pass", summary.pass}, {"detail", summary.detail}}}};
}

std::vector<BitString> preimages_of(const ToyFunctional& f, const BitString& nu) {
    std::vector<const FuncEntry*> hits;
    for (const FuncEntry& e : f.levels[static_cast<size_t>(nu.size())])
        if (e.nu == nu) hits.push_back(&e);
    std::sort(hits.begin(), hits.end(),
              [](const FuncEntry* a, const FuncEntry* b) { return a->stamp < b->stamp; });
    std::vector<BitString> out;
    out.reserve(hits.size());
    for (const FuncEntry* e : hits) out.push_back(e->tau);
    return out;
}

}  // namespace

json counter_trace(const CounterRun& run) {
    json accesses = json::array();
    for (const AccessEntry& e : run.log.entries)
        accesses.push_back(
            {{"stage", e.stage}, {"sigma", e.sigma.str()}, {"t", e.t.str()}, {"q", e.q.str()}});
    Report summary = run.stage_report;
    if (summary) summary = staged_validate(run.outputN);
    if (summary) summary = verify_path_invariant(run);
    json outputs{{"path", run.path.str()},
                 {"accesses", std::move(accesses)},
                 {"refresh_stages", run.refresh_stages},
                 {"stages_run", run.stages_run},
                 {"complete", run.complete},
                 {"checkpoints", static_cast<int64_t>(run.outputN.stages.size())},
                 {"limit", table_to_json(run.outputN.limit().hat)}};
    json inputs{
        {"staged", staged_to_json(run.inputM)}, {"base", run.base.str()}, {"depth", run.depth}};
    return envelope("counter", std::move(inputs), std::move(outputs), summary);
}

json lazy_counter_trace(const WagerSchedule& g, const Dyadic& constant, const BitString& nu0,
                        int64_t depth) {
    auto points = limit_counter_path([&](const BitString&) { return constant; }, g, nu0, depth);
    PartialSums ps(g, true);
    Report summary = Report::ok();
    BitString path = nu0;
    json pts = json::array();
    json gains = json::array();
    for (const PathPoint& p : points) {
        if (p.bit >= 0) path = path.append(p.bit);
        const Dyadic& gain = ps.upto(p.n);
        if (summary && p.Nhat != constant + gain)
            summary = Report::fail("gap identity fails at n=" + std::to_string(p.n));
        if (summary && p.bit > 0)
            summary = Report::fail("tie not resolved to 0 at n=" + std::to_string(p.n));
        pts.push_back(
            {{"n", p.n}, {"Nhat", dyadic_to_json(p.Nhat)}, {"Mhat", dyadic_to_json(p.Mhat)}});
        gains.push_back(dyadic_to_json(gain));
    }
    json outputs{{"path", path.str()}, {"points", std::move(pts)}, {"gains", std::move(gains)}};
    json inputs{{"schedule", schedule_to_json(g)},
                {"constant", dyadic_to_json(constant)},
                {"base", nu0.str()},
                {"depth", depth}};
    return envelope("counter-lazy", std::move(inputs), std::move(outputs), summary);
}

json scenario_divergence_gap(const WagerSchedule& g_div, const WagerSchedule& g_conv,
                             int64_t depth, const std::vector<Dyadic>& thresholds) {
    if (depth < 0) throw Error("negative depth");
    if (g_div.horizon() < depth + 1 || g_conv.horizon() < depth + 1)
        throw Error("schedule exhausted");
    const std::string& cs = g_conv.spec();
    int64_t m = 0;
    if (cs.rfind("log2ceil:", 0) == 0) m = std::stoll(cs.substr(9));
    if (m < 2 || g_conv.offset() != 0)
        throw Error("convergent schedule must be log2ceil:<m> with m >= 2");

    Report summary = Report::ok();
    PartialSums div_ps(g_div, true), conv_ps(g_conv, true);
    json div_gains = json::array(), conv_gains = json::array();
    for (int64_t n = 0; n <= depth; ++n) {
        div_gains.push_back(dyadic_to_json(div_ps.upto(n)));
        conv_gains.push_back(dyadic_to_json(conv_ps.upto(n)));
    }

    json crossings = json::array();
    for (const Dyadic& t : thresholds) {
        json entry{{"threshold", dyadic_to_json(t)}, {"depth", nullptr}};
        for (int64_t n = 0; n <= depth; ++n)
            if (div_ps.upto(n) >= t) {
                entry["depth"] = n;
                break;
            }
        if (entry.at("depth").is_null() && summary)
            summary = Report::fail("threshold " + t.str() + " not crossed within depth " +
                                   std::to_string(depth));
        crossings.push_back(std::move(entry));
    }

    // Exact grouped re-derivation: level n sits in group k = ceil(log2(n+2)),
    // of at most 2^{k-1} levels, each contributing 2^{-mk-1} <= 2^{-2k-1}; so
    // group k sums to at most 2^{-k-2} and the total stays strictly below 1/4.
    const Dyadic quarter(1, 2);
    json groups = json::array();
    Dyadic grouped_total;
    int64_t top_group = std::bit_width(static_cast<uint64_t>(depth) + 1);
    for (int64_t k = 1; k <= top_group; ++k) {
        int64_t lo = (int64_t(1) << (k - 1)) - 1;              // least n with ceil = k
        int64_t hi = std::min(depth, (int64_t(1) << k) - 2);   // greatest such n
        Dyadic sum = Dyadic(hi - lo + 1, 0) * Dyadic(1, m * k + 1);
        Dyadic bound(1, k + 2);
        if (sum > bound && summary)
            summary = Report::fail("group " + std::to_string(k) + " exceeds its geometric bound");
        grouped_total = grouped_total + sum;
        groups.push_back({{"k", k},
                          {"levels", hi - lo + 1},
                          {"sum", dyadic_to_json(sum)},
                          {"bound", dyadic_to_json(bound)}});
    }
    if (grouped_total != conv_ps.upto(depth) && summary)
        summary = Report::fail("grouped sum disagrees with the direct partial sum");
    if (conv_ps.upto(depth) >= quarter && summary)
        summary = Report::fail("convergent gain reached 1/4");

    // Both gain curves are realized by an actual run against the constant-1
    // martingale: capital along the played path is exactly 1 + G(n).
    json runs = json::object();
    for (auto [label, sched] : {std::pair<const char*, const WagerSchedule*>{"div", &g_div},
                                {"conv", &g_conv}}) {
        auto points = limit_counter_path([](const BitString&) { return Dyadic::one(); }, *sched,
                                         BitString(), depth);
        PartialSums ps(*sched, true);
        bool ok = true;
        for (const PathPoint& p : points)
            if (p.Nhat != Dyadic::one() + ps.upto(p.n) || p.bit > 0) ok = false;
        if (!ok && summary)
            summary = Report::fail(std::string("constant-martingale run off the gain curve (") +
                                   label + ")");
        runs[label] = ok;
    }

    json outputs{{"div_gains", std::move(div_gains)},
                 {"conv_gains", std::move(conv_gains)},
                 {"crossings", std::move(crossings)},
                 {"conv_groups", std::move(groups)},
                 {"conv_limit_bound", dyadic_to_json(quarter)},
                 {"runs", std::move(runs)}};
    json thr = json::array();
    for (const Dyadic& t : thresholds) thr.push_back(dyadic_to_json(t));
    json inputs{{"div", schedule_to_json(g_div)},
                {"conv", schedule_to_json(g_conv)},
                {"depth", depth},
                {"thresholds", std::move(thr)}};
    return envelope("divergence-gap", std::move(inputs), std::move(outputs), summary);
}

json scenario_density(const ToyFunctional& f, const ReferenceMachine& r, int64_t c, int64_t d,
                      const BitString& nu0, int64_t depth) {
    Report fv = validate_functional(f);
    if (!fv) throw Error("invalid functional: " + fv.detail);
    Report rv = validate_machine(r);
    if (!rv) throw Error("invalid machine: " + rv.detail);
    if (c < 0 || d < 0) throw Error("constants must be nonnegative");
    if (depth > f.depth) throw Error("search depth beyond the functional depth");
    if (nu0.size() >= depth) throw Error("base string must be shorter than the search depth");
    if (depth - nu0.size() > 16) throw Error("search space too large");

    BitString path = extract_path(counting_martingale(f), nu0, depth);

    json attempts = json::array();
    json certificate;
    int64_t tightest = -1;
    BitString tightest_at;
    int64_t candidates = 0;

    auto try_candidate = [&](const BitString& nu) -> bool {
        ++candidates;
        json attempt{{"nu", nu.str()}};
        std::vector<BitString> pre = preimages_of(f, nu);
        int64_t bound = nu.size() + f.g.eval(nu.size()) - c;
        bool found = false;
        if (pre.empty()) {
            attempt["status"] = "certified";
            certificate = {{"nu", nu.str()},
                           {"preimages", json::array()},
                           {"codes", json::array()},
                           {"margin", nullptr}};
            found = true;
        } else if (auto k = ref_complexity(r, nu); !k) {
            attempt["status"] = "no-description";
        } else if (restricted_enumeration(f, d, nu).size() < pre.size()) {
            attempt["status"] = "index-overflow";
        } else if (*k + f.g.eval(nu.size()) + d > bound) {
            attempt["status"] = "deficit";
            int64_t deficit = *k + f.g.eval(nu.size()) + d - bound;
            attempt["deficit"] = deficit;
            if (tightest < 0 || deficit < tightest) {
                tightest = deficit;
                tightest_at = nu;
            }
        } else {
            attempt["status"] = "certified";
            int64_t len = *k + f.g.eval(nu.size()) + d;
            json mus = json::array(), codes = json::array();
            for (const BitString& mu : pre) {
                BitString code = encode_preimage(f, r, d, mu);
                if (code.size() != len || decode_preimage(f, r, d, code) != mu)
                    throw Error("internal error: certificate entry fails its own recheck");
                mus.push_back(mu.str());
                codes.push_back({{"mu", mu.str()},
                                 {"code", code.str()},
                                 {"length", code.size()},
                                 {"bound", mu.size() - c}});
            }
            certificate = {{"nu", nu.str()},
                           {"preimages", std::move(mus)},
                           {"codes", std::move(codes)},
                           {"margin", bound - len}};
            found = true;
        }
        attempts.push_back(std::move(attempt));
        return found;
    };

    bool certified = false;
    for (int64_t n = nu0.size() + 1; n <= depth && !certified; ++n)
        certified = try_candidate(path.prefix(n));
    for (int64_t n = nu0.size() + 1; n <= depth && !certified; ++n) {
        int64_t ext = n - nu0.size();
        for (uint64_t i = 0; i < (uint64_t(1) << ext) && !certified; ++i) {
            BitString nu = nu0.concat(BitString::from_level_index(ext, i));
            if (nu == path.prefix(n)) continue;
            certified = try_candidate(nu);
        }
    }

    json outputs{{"path", path.str()},
                 {"candidates", candidates},
                 {"attempts", std::move(attempts)},
                 {"certified", certified},
                 {"certificate", certified ? certificate : json(nullptr)},
                 {"exhausted",
                  certified ? json(nullptr)
                            : json{{"tightest_deficit", tightest < 0 ? json(nullptr) : json(tightest)},
                                   {"at", tightest < 0 ? json(nullptr) : json(tightest_at.str())}}}};
    json inputs{{"functional", functional_to_json(f)},
                {"machine", machine_to_json(r)},
                {"c", c},
                {"d", d},
                {"base", nu0.str()},
                {"depth", depth}};
    return envelope("density", std::move(inputs), std::move(outputs), Report::ok());
}

void emit_trace(const json& trace, const std::string& path) { write_json_file(path, trace); }

namespace {

// Certificate audit straight off the stored document: recount the preimages,
// re-measure every code against the machine, and decode it back.
Report recheck_density_certificate(const json& trace) {
    const json& out = trace.at("outputs");
    if (!out.at("certified").get<bool>()) return Report::ok();
    ToyFunctional f = functional_from_json(trace.at("inputs").at("functional"));
    ReferenceMachine r = machine_from_json(trace.at("inputs").at("machine"));
    int64_t c = trace.at("inputs").at("c").get<int64_t>();
    int64_t d = trace.at("inputs").at("d").get<int64_t>();
    const json& cert = out.at("certificate");
    BitString nu(cert.at("nu").get<std::string>());
    if (nu.size() > f.depth) return Report::fail("certificate string beyond the functional depth");
    std::vector<BitString> pre = preimages_of(f, nu);
    const json& mus = cert.at("preimages");
    if (mus.size() != pre.size()) return Report::fail("certificate preimage list is not exact");
    for (size_t i = 0; i < pre.size(); ++i)
        if (mus[i].get<std::string>() != pre[i].str())
            return Report::fail("certificate preimage list is not exact");
    if (cert.at("codes").size() != pre.size())
        return Report::fail("certificate code list is not exact");
    auto k = ref_complexity(r, nu);
    for (const json& entry : cert.at("codes")) {
        BitString mu(entry.at("mu").get<std::string>());
        BitString code(entry.at("code").get<std::string>());
        if (!k || code.size() != *k + f.g.eval(nu.size()) + d)
            return Report::fail("code length for '" + mu.str() + "' is off");
        if (code.size() > mu.size() - c)
            return Report::fail("code for '" + mu.str() + "' misses the compression bound");
        if (decode_preimage(f, r, d, code) != mu)
            return Report::fail("code for '" + mu.str() + "' does not decode back");
    }
    return Report::ok();
}

}  // namespace

Report validate_trace(const json& trace) {
    std::string scenario = trace.at("scenario").get<std::string>();
    const json& in = trace.at("inputs");
    json rebuilt;
    if (scenario == "counter") {
        StagedSupermartingale M = staged_from_json(in.at("staged"));
        rebuilt = counter_trace(
            run_counter(M, BitString(in.at("base").get<std::string>()), in.at("depth").get<int64_t>()));
    } else if (scenario == "counter-lazy") {
        rebuilt = lazy_counter_trace(schedule_from_json(in.at("schedule")),
                                     dyadic_from_json(in.at("constant")),
                                     BitString(in.at("base").get<std::string>()),
                                     in.at("depth").get<int64_t>());
    } else if (scenario == "divergence-gap") {
        std::vector<Dyadic> thresholds;
        for (const json& t : in.at("thresholds")) thresholds.push_back(dyadic_from_json(t));
        rebuilt = scenario_divergence_gap(schedule_from_json(in.at("div")),
                                          schedule_from_json(in.at("conv")),
                                          in.at("depth").get<int64_t>(), thresholds);
    } else if (scenario == "density") {
        Report cert = recheck_density_certificate(trace);
        if (!cert) return cert;
        rebuilt = scenario_density(functional_from_json(in.at("functional")),
                                   machine_from_json(in.at("machine")), in.at("c").get<int64_t>(),
                                   in.at("d").get<int64_t>(),
                                   BitString(in.at("base").get<std::string>()),
                                   in.at("depth").get<int64_t>());
    } else {
        return Report::fail("unknown scenario '" + scenario + "'");
    }
    if (rebuilt != trace)
        return Report::fail("trace does not match a fresh run of '" + scenario + "'");
    if (!trace.at("summary").at("pass").get<bool>())
        return Report::fail("trace records a failing run: " +
                            trace.at("summary").at("detail").get<std::string>());
    return Report::ok();
}

}  // namespace betting
