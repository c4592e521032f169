#include "betting/functional.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace betting {

Report validate_functional(const ToyFunctional& f) {
    if (f.depth < 0) return Report::fail("negative depth");
    if (f.g.horizon() < f.depth) return Report::fail("schedule horizon below functional depth");
    if (static_cast<int64_t>(f.levels.size()) != f.depth + 1)
        return Report::fail("levels list must have one entry per length 0..depth");

    std::set<int64_t> stamps;
    std::vector<std::map<BitString, BitString>> maps(f.levels.size());
    for (int64_t n = 0; n <= f.depth; ++n) {
        int64_t use = n + f.g.eval(n);
        for (const FuncEntry& e : f.levels[static_cast<size_t>(n)]) {
            if (e.tau.size() != use)
                return Report::fail("entry '" + e.tau.str() + "' at level " + std::to_string(n) +
                                    ": input length differs from the use bound " +
                                    std::to_string(use));
            if (e.nu.size() != n)
                return Report::fail("entry '" + e.tau.str() + "' at level " + std::to_string(n) +
                                    ": output length differs from the level");
            if (!maps[static_cast<size_t>(n)].emplace(e.tau, e.nu).second)
                return Report::fail("two outputs for input '" + e.tau.str() + "' at level " +
                                    std::to_string(n));
            if (!stamps.insert(e.stamp).second)
                return Report::fail("duplicate stamp " + std::to_string(e.stamp));
        }
    }
    for (int64_t n = 1; n <= f.depth; ++n) {
        int64_t use_below = (n - 1) + f.g.eval(n - 1);
        for (const auto& [tau, nu] : maps[static_cast<size_t>(n)]) {
            auto parent = maps[static_cast<size_t>(n) - 1].find(tau.prefix(use_below));
            if (parent == maps[static_cast<size_t>(n) - 1].end())
                return Report::fail("entry '" + tau.str() + "' at level " + std::to_string(n) +
                                    ": restriction '" + tau.prefix(use_below).str() +
                                    "' is undefined one level below");
            if (parent->second != nu.prefix(n - 1))
                return Report::fail("entry '" + tau.str() + "' at level " + std::to_string(n) +
                                    ": computes '" + nu.str() + "' but the restriction computes '" +
                                    parent->second.str() + "'");
        }
    }
    return Report::ok();
}

int64_t preimage_count(const ToyFunctional& f, const BitString& nu) {
    if (nu.size() > f.depth) throw Error("string longer than the functional depth");
    int64_t count = 0;
    for (const FuncEntry& e : f.levels[static_cast<size_t>(nu.size())])
        if (e.nu == nu) ++count;
    return count;
}

PreimageCensus preimage_census(const ToyFunctional& f) {
    PreimageCensus census;
    census.counts.resize(static_cast<size_t>(f.depth) + 1);
    for (int64_t n = 0; n <= f.depth; ++n) {
        census.counts[static_cast<size_t>(n)].assign(size_t(1) << n, 0);
        for (const FuncEntry& e : f.levels[static_cast<size_t>(n)])
            ++census.counts[static_cast<size_t>(n)][e.nu.level_index()];
    }
    for (int64_t n = 0; n < f.depth && census.report.pass; ++n) {
        int64_t shift = 1 + f.g.eval(n + 1) - f.g.eval(n);
        for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
            Int lhs = Int(census.counts[static_cast<size_t>(n) + 1][2 * i]) +
                      census.counts[static_cast<size_t>(n) + 1][2 * i + 1];
            Int rhs = Int(census.counts[static_cast<size_t>(n)][i]) << shift;
            if (lhs > rhs) {
                census.report = Report::fail("census inequality fails at '" +
                                             BitString::from_level_index(n, i).str() + "'");
                break;
            }
        }
    }
    return census;
}

CapitalTable counting_martingale(const ToyFunctional& f) {
    CapitalTable t = CapitalTable::zeros(f.depth);
    for (int64_t n = 0; n <= f.depth; ++n) {
        int64_t gn = f.g.eval(n);
        for (const FuncEntry& e : f.levels[static_cast<size_t>(n)])
            t.at(e.nu) = t.at(e.nu) + Dyadic(1, gn);
    }
    return t;
}

std::vector<BitString> restricted_enumeration(const ToyFunctional& f, int64_t d,
                                              const BitString& nu) {
    if (d < 0) throw Error("negative width constant");
    if (nu.size() > f.depth) throw Error("string longer than the functional depth");
    std::vector<const FuncEntry*> hits;
    for (const FuncEntry& e : f.levels[static_cast<size_t>(nu.size())])
        if (e.nu == nu) hits.push_back(&e);
    std::sort(hits.begin(), hits.end(),
              [](const FuncEntry* a, const FuncEntry* b) { return a->stamp < b->stamp; });
    Int cutoff = Int(1) << (d + f.g.eval(nu.size()));
    if (Int(hits.size()) > cutoff) hits.resize((cutoff - 1).convert_to<size_t>());
    std::vector<BitString> out;
    out.reserve(hits.size());
    for (const FuncEntry* e : hits) out.push_back(e->tau);
    return out;
}

json functional_to_json(const ToyFunctional& f) {
    json levels = json::array();
    for (const auto& level : f.levels) {
        json entries = json::array();
        for (const FuncEntry& e : level)
            entries.push_back({{"tau", e.tau.str()}, {"nu", e.nu.str()}, {"stamp", e.stamp}});
        levels.push_back(std::move(entries));
    }
    return {{"name", f.name},
            {"schedule", schedule_to_json(f.g)},
            {"depth", f.depth},
            {"levels", std::move(levels)}};
}

ToyFunctional functional_from_json(const json& j) {
    ToyFunctional f{schedule_from_json(j.at("schedule")), j.at("depth").get<int64_t>(),
                    j.value("name", ""), {}};
    for (const json& level : j.at("levels")) {
        std::vector<FuncEntry> entries;
        for (const json& e : level)
            entries.push_back(FuncEntry{BitString(e.at("tau").get<std::string>()),
                                        BitString(e.at("nu").get<std::string>()),
                                        e.at("stamp").get<int64_t>()});
        f.levels.push_back(std::move(entries));
    }
    return f;
}

}  // namespace betting
