#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "betting/functional.hpp"
#include "betting/kc.hpp"
#include "betting/machine.hpp"
#include "betting/table.hpp"

namespace betting {

// V(k): minimal strings whose capital reaches k, with the measure-style bound
// weight * k <= M(lambda) checked exactly.
struct HighCapitalSet {
    std::vector<BitString> strings;  // length-lex order; an antichain
    Dyadic weight;                   // Sum 2^-|sigma|
    Report report;
};
HighCapitalSet high_capital_set(const CapitalTable& M, const Dyadic& k);

// Requests a codeword of length |sigma| - c for every sigma in V(k).
// Feasible iff no length goes negative and the total mass 2^c * weight stays
// within the Kraft bound; the witness on overflow is the mass itself.
struct CompressOutcome {
    bool feasible = false;
    std::string reason;  // empty when feasible
    HighCapitalSet set;
    Dyadic requested_mass;
    std::vector<std::pair<BitString, BitString>> assignments;  // sigma -> codeword
    CodeBook book;
};
CompressOutcome compress_high_capital(const CapitalTable& M, int64_t c, const Dyadic& k);

// Two-part code for a preimage mu of nu = levels[n](mu): the shortest machine
// codeword for nu followed by mu's position in the restricted enumeration
// Q(d, nu), written in exactly g(|nu|) + d bits. Total length is therefore
// K_ref(nu) + g(|nu|) + d. Throws "no description" when the machine does not
// describe nu and "index overflow" when mu falls outside Q(d, nu).
BitString encode_preimage(const ToyFunctional& f, const ReferenceMachine& r, int64_t d,
                          const BitString& mu);

// Exact inverse: strips the self-delimiting machine part, reads the
// fixed-width index, and replays the enumeration.
BitString decode_preimage(const ToyFunctional& f, const ReferenceMachine& r, int64_t d,
                          const BitString& code);

}  // namespace betting
