#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include "betting/report.hpp"

namespace betting {

// Finite binary string. Ordered first by length and then lexicographically,
// which is the scan order used throughout the construction.
class BitString {
public:
    BitString() = default;
    explicit BitString(std::string bits);        // validates characters
    static BitString parse(std::string_view text) { return BitString(std::string(text)); }

    int64_t size() const { return static_cast<int64_t>(bits_.size()); }
    bool empty() const { return bits_.empty(); }
    int bit(int64_t i) const { return bits_[static_cast<size_t>(i)] - '0'; }
    const std::string& str() const { return bits_; }

    BitString append(int b) const;
    BitString prefix(int64_t n) const;           // first n bits
    bool is_prefix_of(const BitString& o) const;
    BitString concat(const BitString& o) const;

    // Index of this string among all strings of the same length, in lexicographic
    // order (big-endian binary value). Requires size() <= 62.
    uint64_t level_index() const;
    static BitString from_level_index(int64_t length, uint64_t index);

    std::strong_ordering operator<=>(const BitString& o) const;
    bool operator==(const BitString& o) const = default;

private:
    std::string bits_;
};

}  // namespace betting
