#include <CLI11.hpp>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "betting/coder.hpp"
#include "betting/counter.hpp"
#include "betting/functional.hpp"
#include "betting/generators.hpp"
#include "betting/granularize.hpp"
#include "betting/kc.hpp"
#include "betting/machine.hpp"
#include "betting/scenario.hpp"
#include "betting/staged.hpp"

using namespace betting;

namespace {

struct Session {
    uint64_t seed = 1;
    bool all_pass = true;

    void report(const std::string& name, const Report& r) {
        if (r.pass) {
            std::cout << "[pass] " << name << "\n";
        } else {
            std::cout << "[FAIL] " << name << ": " << r.detail << "\n";
            all_pass = false;
        }
    }
};

void finish_trace(Session& s, const json& trace, const std::string& path) {
    if (!path.empty()) {
        emit_trace(trace, path);
        std::cout << "trace written to " << path << "\n";
    }
    const json& summary = trace.at("summary");
    s.report(trace.at("scenario").get<std::string>() + " summary",
             summary.at("pass").get<bool>() ? Report::ok()
                                            : Report::fail(summary.at("detail").get<std::string>()));
}

void add_check(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("check", "Supermartingale and granularity predicates on a table");
    auto table_file = std::make_shared<std::string>();
    auto spec = std::make_shared<std::string>();
    auto horizon = std::make_shared<int64_t>(-1);
    cmd->add_option("--table", *table_file, "capital table JSON")->required();
    cmd->add_option("--schedule", *spec, "wager schedule spec")->required();
    cmd->add_option("--horizon", *horizon, "schedule horizon (default: table depth)");
    cmd->callback([&s, table_file, spec, horizon] {
        CapitalTable t = table_from_json(load_json_file(*table_file));
        WagerSchedule g = WagerSchedule::parse(*spec, *horizon < 0 ? t.depth : *horizon);
        s.report("supermartingale", check_supermartingale(t));
        s.report("granularity (" + *spec + ")", check_granularity(t, g));
    });
}

void add_granularize(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("granularize", "Round a supermartingale to a granular one");
    auto table_file = std::make_shared<std::string>();
    auto spec = std::make_shared<std::string>();
    auto horizon = std::make_shared<int64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--table", *table_file, "capital table JSON")->required();
    cmd->add_option("--schedule", *spec, "wager schedule spec")->required();
    cmd->add_option("--horizon", *horizon, "tail horizon")->required();
    cmd->add_option("--out", *out, "output JSON file");
    cmd->callback([&s, table_file, spec, horizon, out] {
        CapitalTable n = table_from_json(load_json_file(*table_file));
        s.report("input supermartingale", check_supermartingale(n));
        WagerSchedule g = WagerSchedule::parse(*spec, *horizon);
        GranularizeResult r = granularize(n, g, *horizon);
        s.report("output supermartingale", check_supermartingale(r.combined));
        s.report("hat granularity", check_granularity(r.hat, g));
        Report sandwich = Report::ok();
        for (int64_t level = 0; level <= n.depth && sandwich.pass; ++level)
            for (uint64_t i = 0; i < (uint64_t(1) << level); ++i) {
                const Dyadic& v = n.at(level, i);
                const Dyadic& h = r.hat.at(level, i);
                if (h > v || v > h + Dyadic(1, g.eval(level))) {
                    sandwich = Report::fail("sandwich fails at '" +
                                            BitString::from_level_index(level, i).str() + "'");
                    break;
                }
            }
        s.report("sandwich", sandwich);
        if (!out->empty()) {
            json doc{{"schedule", schedule_to_json(g)},
                     {"hat", table_to_json(r.hat)},
                     {"combined", table_to_json(r.combined)}};
            json tail = json::array();
            for (const Dyadic& q : r.tail) tail.push_back(dyadic_to_json(q));
            doc["tail"] = std::move(tail);
            write_json_file(*out, doc);
            std::cout << "granular decomposition written to " << *out << "\n";
        }
    });
}

void add_counter(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand(
        "counter", "Run the counterstrategy construction (staged, lazy, or generated inputs)");
    auto input = std::make_shared<std::string>();
    auto spec = std::make_shared<std::string>();
    auto constant = std::make_shared<std::string>();
    auto base = std::make_shared<std::string>();
    auto trace_path = std::make_shared<std::string>();
    auto depth = std::make_shared<int64_t>(0);
    auto budget = std::make_shared<int64_t>(-1);
    auto gen = std::make_shared<int64_t>(0);
    auto lazy = std::make_shared<bool>(false);
    cmd->add_option("--input", *input, "staged supermartingale JSON");
    cmd->add_option("--schedule", *spec, "wager schedule spec (lazy mode)");
    cmd->add_option("--const", *constant, "constant martingale value (lazy mode)");
    cmd->add_option("--base", *base, "base string nu0 (default empty)");
    cmd->add_option("--depth", *depth, "run depth")->required();
    cmd->add_option("--budget", *budget, "stage budget (default: run to quiescence)");
    cmd->add_option("--gen", *gen, "instead: this many random seeded property runs");
    cmd->add_flag("--lazy", *lazy, "path-local evaluation against the constant martingale");
    cmd->add_option("--trace", *trace_path, "trace output file");
    cmd->callback([&s, input, spec, constant, base, trace_path, depth, budget, gen, lazy] {
        if (*lazy) {
            WagerSchedule g = WagerSchedule::parse(*spec, *depth);
            finish_trace(s,
                         lazy_counter_trace(g, dyadic_from_text(*constant), BitString(*base), *depth),
                         *trace_path);
            return;
        }
        if (*gen > 0) {
            Rng rng(s.seed);
            Report all = Report::ok();
            for (int64_t i = 0; i < *gen && all.pass; ++i) {
                WagerSchedule g = random_schedule(rng, *depth, 4);
                StagedSupermartingale m = random_staged(rng, g, *depth, pick(rng, 1, 4), true);
                CounterRun run = run_counter(m, BitString(), *depth);
                if (!run.stage_report) all = run.stage_report;
                else if (Report p = verify_path_invariant(run); !p) all = p;
            }
            s.report("generated runs (seed " + std::to_string(s.seed) + ")", all);
            return;
        }
        StagedSupermartingale m = staged_from_json(load_json_file(*input));
        std::optional<int64_t> sb;
        if (*budget >= 0) sb = *budget;
        CounterRun run = run_counter(m, BitString(*base), *depth, sb);
        std::cout << "path " << run.path.str() << ", " << run.log.entries.size() << " accesses, "
                  << run.stages_run << " stages" << (run.complete ? "" : " (incomplete)") << "\n";
        finish_trace(s, counter_trace(run), *trace_path);
    });
}

void add_bridge(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("bridge", "Preimage counting and the induced supermartingale");
    auto file = std::make_shared<std::string>();
    auto enum_nu = std::make_shared<std::string>();
    auto d = std::make_shared<int64_t>(0);
    auto census = std::make_shared<bool>(false);
    cmd->add_option("--functional", *file, "functional JSON")->required();
    cmd->add_flag("--census", *census, "check the census inequality and the table predicates");
    auto* enum_opt = cmd->add_option("--enum", *enum_nu, "print the restricted enumeration of nu");
    cmd->add_option("--d", *d, "width constant for --enum");
    cmd->callback([&s, file, enum_nu, d, census, enum_opt] {
        ToyFunctional f = functional_from_json(load_json_file(*file));
        s.report("functional consistency", validate_functional(f));
        if (!s.all_pass) return;
        if (*census) {
            s.report("census inequality", preimage_census(f).report);
            CapitalTable h = counting_martingale(f);
            s.report("counting martingale supermartingale", check_supermartingale(h));
            s.report("counting martingale granularity", check_granularity(h, f.g));
        }
        if (enum_opt->count() > 0) {
            BitString nu(*enum_nu);
            std::cout << "Q(" << *d << ", '" << nu.str() << "'):";
            for (const BitString& mu : restricted_enumeration(f, *d, nu))
                std::cout << " " << mu.str();
            std::cout << "\n";
        }
    });
}

void add_kc(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("kc", "Online prefix-free codeword allocation");
    auto requests_file = std::make_shared<std::string>();
    auto out = std::make_shared<std::string>();
    cmd->add_option("--requests", *requests_file, "request stream JSON")->required();
    cmd->add_option("--out", *out, "write the final book JSON");
    cmd->callback([&s, requests_file, out] {
        std::vector<KCRequest> requests = requests_from_json(load_json_file(*requests_file));
        KCOutcome outcome = kc_allocate(CodeBook(), requests);
        for (size_t i = 0; i < requests.size(); ++i) {
            std::cout << "length " << requests[i].length << " (" << requests[i].payload << "): ";
            if (outcome.decisions[i])
                std::cout << "'" << outcome.decisions[i]->str() << "'\n";
            else
                std::cout << "rejected\n";
        }
        s.report("book invariants", check_book(outcome.book));
        if (!out->empty()) {
            write_json_file(*out, book_to_json(outcome.book));
            std::cout << "book written to " << *out << "\n";
        }
    });
}

void add_compress(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("compress", "Codewords of length |sigma|-c for V(k)");
    auto table_file = std::make_shared<std::string>();
    auto k_text = std::make_shared<std::string>();
    auto c = std::make_shared<int64_t>(0);
    auto out = std::make_shared<std::string>();
    cmd->add_option("--table", *table_file, "capital table JSON")->required();
    cmd->add_option("--k", *k_text, "capital threshold (dyadic)")->required();
    cmd->add_option("--c", *c, "compression constant")->required();
    cmd->add_option("--out", *out, "write the book JSON");
    cmd->callback([&s, table_file, k_text, c, out] {
        CapitalTable m = table_from_json(load_json_file(*table_file));
        CompressOutcome r = compress_high_capital(m, *c, dyadic_from_text(*k_text));
        std::cout << "V(k) = {";
        for (size_t i = 0; i < r.set.strings.size(); ++i)
            std::cout << (i ? ", '" : "'") << r.set.strings[i].str() << "'";
        std::cout << "}, weight " << r.set.weight.str() << "\n";
        s.report("capital bound weight*k <= M(lambda)", r.set.report);
        if (r.feasible) {
            for (const auto& [sigma, word] : r.assignments)
                std::cout << "'" << sigma.str() << "' -> '" << word.str() << "'\n";
            s.report("book invariants", check_book(r.book));
            if (!out->empty()) {
                write_json_file(*out, book_to_json(r.book));
                std::cout << "book written to " << *out << "\n";
            }
        } else {
            std::cout << "infeasible: " << r.reason << " (requested mass "
                      << r.requested_mass.str() << ")\n";
        }
    });
}

void add_code(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("code", "Two-part preimage coding against a reference machine");
    auto functional_file = std::make_shared<std::string>();
    auto machine_file = std::make_shared<std::string>();
    auto d = std::make_shared<int64_t>(0);
    auto mode = std::make_shared<std::string>();
    auto bits = std::make_shared<std::string>();
    cmd->add_option("--functional", *functional_file, "functional JSON")->required();
    cmd->add_option("--machine", *machine_file, "reference machine JSON")->required();
    cmd->add_option("--d", *d, "index width constant")->required();
    cmd->add_option("mode", *mode, "encode or decode")->required()->check(CLI::IsMember({"encode", "decode"}));
    cmd->add_option("bits", *bits, "preimage (encode) or code (decode)")->required();
    cmd->callback([&s, functional_file, machine_file, d, mode, bits] {
        ToyFunctional f = functional_from_json(load_json_file(*functional_file));
        Report fv = validate_functional(f);
        s.report("functional consistency", fv);
        if (!fv) return;
        ReferenceMachine r = machine_from_json(load_json_file(*machine_file));
        if (*mode == "encode") {
            BitString code = encode_preimage(f, r, *d, BitString(*bits));
            std::cout << code.str() << "\n";
            s.report("round trip", decode_preimage(f, r, *d, code) == BitString(*bits)
                                       ? Report::ok()
                                       : Report::fail("decode does not invert encode"));
        } else {
            std::cout << decode_preimage(f, r, *d, BitString(*bits)).str() << "\n";
        }
    });
}

void add_demo_gap(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("demo-gap", "Divergent vs convergent accumulated gains");
    auto div = std::make_shared<std::string>();
    auto conv = std::make_shared<std::string>();
    auto depth = std::make_shared<int64_t>(0);
    auto thresholds = std::make_shared<std::vector<std::string>>();
    auto trace_path = std::make_shared<std::string>();
    cmd->add_option("--div", *div, "divergent schedule spec")->required();
    cmd->add_option("--conv", *conv, "convergent schedule spec (log2ceil:<m>, m >= 2)")->required();
    cmd->add_option("--depth", *depth, "curve depth")->required();
    cmd->add_option("--thresholds", *thresholds, "gain thresholds the divergent curve must cross");
    cmd->add_option("--trace", *trace_path, "trace output file");
    cmd->callback([&s, div, conv, depth, thresholds, trace_path] {
        std::vector<Dyadic> th;
        for (const std::string& t : *thresholds) th.push_back(dyadic_from_text(t));
        json trace = scenario_divergence_gap(WagerSchedule::parse(*div, *depth + 1),
                                             WagerSchedule::parse(*conv, *depth + 1), *depth, th);
        for (const json& c : trace.at("outputs").at("crossings"))
            std::cout << "gain " << dyadic_from_json(c.at("threshold")).str() << " reached at depth "
                      << (c.at("depth").is_null() ? std::string("(never)")
                                                  : std::to_string(c.at("depth").get<int64_t>()))
                      << "\n";
        finish_trace(s, trace, *trace_path);
    });
}

void add_density(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("density", "Search for a fully compressible extension");
    auto functional_file = std::make_shared<std::string>();
    auto machine_file = std::make_shared<std::string>();
    auto c = std::make_shared<int64_t>(0);
    auto d = std::make_shared<int64_t>(0);
    auto base = std::make_shared<std::string>();
    auto depth = std::make_shared<int64_t>(0);
    auto trace_path = std::make_shared<std::string>();
    cmd->add_option("--functional", *functional_file, "functional JSON")->required();
    cmd->add_option("--machine", *machine_file, "reference machine JSON")->required();
    cmd->add_option("--c", *c, "compression constant")->required();
    cmd->add_option("--d", *d, "index width constant")->required();
    cmd->add_option("--base", *base, "base string nu0 (default empty)");
    cmd->add_option("--depth", *depth, "search depth")->required();
    cmd->add_option("--trace", *trace_path, "trace output file");
    cmd->callback([&s, functional_file, machine_file, c, d, base, depth, trace_path] {
        ToyFunctional f = functional_from_json(load_json_file(*functional_file));
        ReferenceMachine r = machine_from_json(load_json_file(*machine_file));
        json trace = scenario_density(f, r, *c, *d, BitString(*base), *depth);
        const json& out = trace.at("outputs");
        if (out.at("certified").get<bool>())
            std::cout << "certificate at '" << out.at("certificate").at("nu").get<std::string>()
                      << "' (" << out.at("certificate").at("preimages").size() << " preimages)\n";
        else
            std::cout << "exhausted after " << out.at("candidates").get<int64_t>()
                      << " candidates\n";
        finish_trace(s, trace, *trace_path);
    });
}

void add_validate_trace(CLI::App& app, Session& s) {
    auto* cmd = app.add_subcommand("validate-trace", "Re-run a trace and compare bit for bit");
    auto trace_path = std::make_shared<std::string>();
    cmd->add_option("--trace", *trace_path, "trace JSON file")->required();
    cmd->callback([&s, trace_path] {
        json trace = load_json_file(*trace_path);
        s.report("trace '" + trace.value("scenario", "?") + "'", validate_trace(trace));
    });
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Betting strategies with restricted wagers: construction and coding toolkit"};
    app.require_subcommand(1);
    Session session;
    app.add_option("--seed", session.seed, "seed for generated inputs");

    add_check(app, session);
    add_granularize(app, session);
    add_counter(app, session);
    add_bridge(app, session);
    add_kc(app, session);
    add_compress(app, session);
    add_code(app, session);
    add_demo_gap(app, session);
    add_density(app, session);
    add_validate_trace(app, session);
    // let --seed appear after the subcommand name too
    for (CLI::App* sub : app.get_subcommands({})) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return session.all_pass ? 0 : 1;
}
