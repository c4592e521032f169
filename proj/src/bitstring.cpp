#include "betting/bitstring.hpp"

namespace betting {

BitString::BitString(std::string bits) : bits_(std::move(bits)) {
    for (char c : bits_)
        if (c != '0' && c != '1') throw Error("bit string may contain only '0' and '1'");
}

BitString BitString::append(int b) const {
    BitString r = *this;
    r.bits_.push_back(b ? '1' : '0');
    return r;
}

BitString BitString::prefix(int64_t n) const {
    if (n < 0 || n > size()) throw Error("prefix length out of range");
    BitString r;
    r.bits_ = bits_.substr(0, static_cast<size_t>(n));
    return r;
}

bool BitString::is_prefix_of(const BitString& o) const {
    return size() <= o.size() && o.bits_.compare(0, bits_.size(), bits_) == 0;
}

BitString BitString::concat(const BitString& o) const {
    BitString r = *this;
    r.bits_ += o.bits_;
    return r;
}

uint64_t BitString::level_index() const {
    if (size() > 62) throw Error("string too long for dense level indexing");
    uint64_t v = 0;
    for (char c : bits_) v = (v << 1) | static_cast<uint64_t>(c - '0');
    return v;
}

BitString BitString::from_level_index(int64_t length, uint64_t index) {
    if (length < 0 || length > 62) throw Error("string too long for dense level indexing");
    BitString r;
    r.bits_.resize(static_cast<size_t>(length));
    for (int64_t i = length - 1; i >= 0; --i) {
        r.bits_[static_cast<size_t>(i)] = (index & 1) ? '1' : '0';
        index >>= 1;
    }
    return r;
}

std::strong_ordering BitString::operator<=>(const BitString& o) const {
    if (auto c = size() <=> o.size(); c != 0) return c;
    int cmp = bits_.compare(o.bits_);
    if (cmp < 0) return std::strong_ordering::less;
    if (cmp > 0) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

}  // namespace betting
