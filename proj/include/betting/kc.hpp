#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betting/bitstring.hpp"
#include "betting/dyadic.hpp"
#include "betting/json_util.hpp"
#include "betting/report.hpp"

namespace betting {

struct KCRequest {
    int64_t length = 0;
    std::string payload;
};

// Online prefix-free codeword assignment. The unassigned part of {0,1}^inf is
// kept as a list of free cylinder roots ordered left to right; allocation
// preserves the invariant that their lengths strictly decrease in that order,
// which is what makes "reject exactly when 2^-l exceeds the free weight"
// coincide with leftmost fit.
class CodeBook {
public:
    CodeBook();

    // Leftmost free codeword of the requested length, or nullopt when the
    // remaining Kraft mass is short. Assigned codewords never overlap.
    std::optional<BitString> allocate(int64_t length, const std::string& payload);

    const std::vector<std::pair<std::string, BitString>>& assigned() const { return assigned_; }
    const Dyadic& free_weight() const { return free_weight_; }
    const std::vector<BitString>& free_roots() const { return free_roots_; }

private:
    std::vector<std::pair<std::string, BitString>> assigned_;
    std::vector<BitString> free_roots_;
    Dyadic free_weight_;
};

struct KCOutcome {
    CodeBook book;
    std::vector<std::optional<BitString>> decisions;  // one per request, nullopt = rejected
};

KCOutcome kc_allocate(CodeBook book, const std::vector<KCRequest>& requests);

// Pairwise prefix-incomparability; names the first offending pair.
Report check_prefix_free(const std::vector<BitString>& words);

// Assigned mass + free weight must equal one exactly, and the assigned
// codewords must be prefix-free.
Report check_book(const CodeBook& book);

json book_to_json(const CodeBook& book);
std::vector<KCRequest> requests_from_json(const json& j);

}  // namespace betting
