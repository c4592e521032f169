#include "betting/machine.hpp"

namespace betting {

Report validate_machine(const ReferenceMachine& r) {
    for (size_t i = 0; i < r.table.size(); ++i) {
        for (size_t j = 0; j < r.table.size(); ++j) {
            if (i == j) continue;
            if (r.table[i].first == r.table[j].first)
                return Report::fail("duplicate codeword '" + r.table[i].first.str() + "'");
            if (r.table[i].first.is_prefix_of(r.table[j].first))
                return Report::fail("codeword '" + r.table[i].first.str() + "' is a prefix of '" +
                                    r.table[j].first.str() + "'");
        }
    }
    return Report::ok();
}

std::optional<BitString> shortest_codeword(const ReferenceMachine& r, const BitString& nu) {
    Report valid = validate_machine(r);
    if (!valid) throw Error("invalid machine: " + valid.detail);
    std::optional<BitString> best;
    for (const auto& [word, out] : r.table)
        if (out == nu && (!best || word < *best)) best = word;
    return best;
}

std::optional<int64_t> ref_complexity(const ReferenceMachine& r, const BitString& nu) {
    auto word = shortest_codeword(r, nu);
    if (!word) return std::nullopt;
    return word->size();
}

json machine_to_json(const ReferenceMachine& r) {
    json table = json::object();
    for (const auto& [word, out] : r.table) table[word.str()] = out.str();
    return {{"table", std::move(table)}};
}

ReferenceMachine machine_from_json(const json& j) {
    ReferenceMachine r;
    for (const auto& [word, out] : j.at("table").items())
        r.table.emplace_back(BitString(word), BitString(out.get<std::string>()));
    return r;
}

}  // namespace betting
