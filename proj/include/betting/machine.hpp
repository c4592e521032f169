#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "betting/bitstring.hpp"
#include "betting/json_util.hpp"
#include "betting/report.hpp"

namespace betting {

// Explicit finite prefix-free machine: codeword -> output. Plays the role of
// the machine relative to which description lengths are measured; complexity
// against it is exact and auditable.
struct ReferenceMachine {
    std::vector<std::pair<BitString, BitString>> table;
};

// Domain prefix-free and duplicate-free.
Report validate_machine(const ReferenceMachine& r);

// K_ref(nu): length of the shortest codeword mapping to nu; nullopt when nu
// has no description. Throws on an invalid machine.
std::optional<int64_t> ref_complexity(const ReferenceMachine& r, const BitString& nu);

// The shortest (then lexicographically least) codeword for nu.
std::optional<BitString> shortest_codeword(const ReferenceMachine& r, const BitString& nu);

json machine_to_json(const ReferenceMachine& r);
ReferenceMachine machine_from_json(const json& j);

}  // namespace betting
