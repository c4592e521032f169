#include "betting/kc.hpp"

namespace betting {

CodeBook::CodeBook() : free_roots_{BitString()}, free_weight_(Dyadic::one()) {}

std::optional<BitString> CodeBook::allocate(int64_t length, const std::string& payload) {
    if (length < 0) throw Error("codeword length must be nonnegative");
    if (Dyadic::pow2(-length) > free_weight_) return std::nullopt;
    // Root lengths strictly decrease left to right, so the first root that is
    // short enough is the leftmost one; one always exists when the mass fits.
    size_t pos = 0;
    while (pos < free_roots_.size() && free_roots_[pos].size() > length) ++pos;
    if (pos == free_roots_.size()) throw Error("internal error: free weight out of step");
    BitString root = free_roots_[pos];
    BitString word = root;
    for (int64_t i = root.size(); i < length; ++i) word = word.append(0);
    // The off-word subtrees root*0^i*1, deepest (leftmost) first, replace root.
    std::vector<BitString> fresh;
    BitString stem = word;
    for (int64_t i = length - root.size(); i > 0; --i) {
        stem = stem.prefix(root.size() + i - 1);
        fresh.push_back(stem.append(1));
    }
    free_roots_.erase(free_roots_.begin() + static_cast<ptrdiff_t>(pos));
    free_roots_.insert(free_roots_.begin() + static_cast<ptrdiff_t>(pos), fresh.begin(),
                       fresh.end());
    free_weight_ = free_weight_ - Dyadic::pow2(-length);
    assigned_.emplace_back(payload, word);
    return word;
}

KCOutcome kc_allocate(CodeBook book, const std::vector<KCRequest>& requests) {
    KCOutcome out{std::move(book), {}};
    out.decisions.reserve(requests.size());
    for (const KCRequest& r : requests) out.decisions.push_back(out.book.allocate(r.length, r.payload));
    return out;
}

Report check_prefix_free(const std::vector<BitString>& words) {
    for (size_t i = 0; i < words.size(); ++i)
        for (size_t j = 0; j < words.size(); ++j)
            if (i != j && words[i].is_prefix_of(words[j]))
                return Report::fail("'" + words[i].str() + "' is a prefix of '" + words[j].str() +
                                    "'");
    return Report::ok();
}

Report check_book(const CodeBook& book) {
    std::vector<BitString> words;
    Dyadic mass;
    for (const auto& [payload, word] : book.assigned()) {
        words.push_back(word);
        mass = mass + Dyadic::pow2(-word.size());
    }
    Report pf = check_prefix_free(words);
    if (!pf) return pf;
    if (mass + book.free_weight() != Dyadic::one())
        return Report::fail("assigned mass " + mass.str() + " plus free weight " +
                            book.free_weight().str() + " is not one");
    return Report::ok();
}

json book_to_json(const CodeBook& book) {
    json assigned = json::array();
    for (const auto& [payload, word] : book.assigned())
        assigned.push_back({{"payload", payload}, {"codeword", word.str()}});
    json roots = json::array();
    for (const BitString& r : book.free_roots()) roots.push_back(r.str());
    return {{"assigned", std::move(assigned)},
            {"free_weight", dyadic_to_json(book.free_weight())},
            {"free_roots", std::move(roots)}};
}

std::vector<KCRequest> requests_from_json(const json& j) {
    std::vector<KCRequest> out;
    for (const json& r : j)
        out.push_back(KCRequest{r.at("length").get<int64_t>(), r.value("payload", "")});
    return out;
}

}  // namespace betting
