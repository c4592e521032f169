#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <compare>
#include <cstdint>
#include <string>

#include "betting/report.hpp"

namespace betting {

using Int = boost::multiprecision::cpp_int;

// Exact nonnegative dyadic rational: num * 2^-exp with exp >= 0.
// Canonical: num is odd whenever exp > 0, and num == 0 implies exp == 0,
// so equality is structural. All arithmetic is exact.
class Dyadic {
public:
    Dyadic() = default;
    Dyadic(Int num, int64_t exp);                    // canonicalizes
    static Dyadic from_int(const Int& n) { return Dyadic(n, 0); }
    static Dyadic pow2(int64_t e);                   // 2^e, e may be negative
    static Dyadic zero() { return {}; }
    static Dyadic one() { return Dyadic(1, 0); }

    const Int& num() const { return num_; }
    int64_t exp() const { return exp_; }
    bool is_zero() const { return num_ == 0; }

    Dyadic operator+(const Dyadic& o) const;
    Dyadic operator-(const Dyadic& o) const;         // throws "negative capital"
    Dyadic operator*(const Int& k) const;            // k >= 0
    Dyadic operator*(const Dyadic& o) const;
    Dyadic scale_pow2(int64_t k) const;              // *this * 2^k
    std::strong_ordering operator<=>(const Dyadic& o) const;
    bool operator==(const Dyadic& o) const = default;

    // True iff the value is an integer multiple of 2^-j (j >= 0).
    bool is_multiple_of_pow2(int64_t j) const { return exp_ <= j; }

    // this / 2^-j, which must be a nonnegative integer; throws otherwise.
    Int exact_quotient_pow2(int64_t j) const;

    std::string str() const;                         // "3/16", "2", "0"

private:
    Int num_ = 0;
    int64_t exp_ = 0;
};

// S(q, 2^-j): the largest integer multiple of 2^-j strictly less than q,
// with S(0, p) = 0.
Dyadic floor_multiple(const Dyadic& q, int64_t j);

// Parses "k" or "a/b" with b a positive power of two.
Dyadic dyadic_from_text(const std::string& text);

}  // namespace betting
