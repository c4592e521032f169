#include "betting/dyadic.hpp"

#include <algorithm>

namespace betting {

Dyadic::Dyadic(Int num, int64_t exp) : num_(std::move(num)), exp_(exp) {
    if (num_ < 0) throw Error("negative capital");
    if (exp_ < 0) {
        num_ <<= static_cast<unsigned>(-exp_);
        exp_ = 0;
    }
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    while (exp_ > 0 && (num_ & 1) == 0) {
        num_ >>= 1;
        --exp_;
    }
}

Dyadic Dyadic::pow2(int64_t e) {
    return e >= 0 ? Dyadic(Int(1) << static_cast<unsigned>(e), 0) : Dyadic(1, -e);
}

Dyadic Dyadic::operator+(const Dyadic& o) const {
    int64_t e = std::max(exp_, o.exp_);
    Int a = num_ << static_cast<unsigned>(e - exp_);
    Int b = o.num_ << static_cast<unsigned>(e - o.exp_);
    return Dyadic(a + b, e);
}

Dyadic Dyadic::operator-(const Dyadic& o) const {
    int64_t e = std::max(exp_, o.exp_);
    Int a = num_ << static_cast<unsigned>(e - exp_);
    Int b = o.num_ << static_cast<unsigned>(e - o.exp_);
    if (a < b) throw Error("negative capital");
    return Dyadic(a - b, e);
}

Dyadic Dyadic::operator*(const Int& k) const {
    if (k < 0) throw Error("negative capital");
    return Dyadic(num_ * k, exp_);
}

Dyadic Dyadic::operator*(const Dyadic& o) const {
    return Dyadic(num_ * o.num_, exp_ + o.exp_);
}

Dyadic Dyadic::scale_pow2(int64_t k) const {
    if (is_zero()) return {};
    return Dyadic(num_, exp_ - k);
}

std::strong_ordering Dyadic::operator<=>(const Dyadic& o) const {
    int64_t e = std::max(exp_, o.exp_);
    Int a = num_ << static_cast<unsigned>(e - exp_);
    Int b = o.num_ << static_cast<unsigned>(e - o.exp_);
    if (a < b) return std::strong_ordering::less;
    if (a > b) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

Int Dyadic::exact_quotient_pow2(int64_t j) const {
    // value * 2^j = num * 2^(j - exp)
    if (j >= exp_) return num_ << static_cast<unsigned>(j - exp_);
    unsigned back = static_cast<unsigned>(exp_ - j);
    Int q = num_ >> back;
    if ((q << back) != num_) throw Error("not a multiple of the requested wager unit");
    return q;
}

std::string Dyadic::str() const {
    if (exp_ == 0) return num_.str();
    return num_.str() + "/" + (Int(1) << static_cast<unsigned>(exp_)).str();
}

Dyadic floor_multiple(const Dyadic& q, int64_t j) {
    if (j < 0) throw Error("floor_multiple needs a unit 2^-j with j >= 0");
    if (q.is_zero()) return Dyadic::zero();
    // t = q / 2^-j; the result is (ceil(t) - 1) * 2^-j.
    if (j >= q.exp()) {
        Int t = q.num() << static_cast<unsigned>(j - q.exp());
        return Dyadic(t - 1, j);
    }
    unsigned back = static_cast<unsigned>(q.exp() - j);
    Int t = q.num() >> back;
    bool exact = (t << back) == q.num();
    if (exact) t -= 1;  // strictness: q itself is a multiple, step down
    return Dyadic(t, j);
}

Dyadic dyadic_from_text(const std::string& text) {
    auto slash = text.find('/');
    try {
        if (slash == std::string::npos) return Dyadic(Int(text), 0);
        Int num(text.substr(0, slash));
        Int den(text.substr(slash + 1));
        if (den <= 0) throw Error("dyadic denominator must be a positive power of two");
        int64_t e = 0;
        while ((den & 1) == 0) {
            den >>= 1;
            ++e;
        }
        if (den != 1) throw Error("dyadic denominator must be a power of two");
        return Dyadic(num, e);
    } catch (const std::runtime_error& ex) {
        throw Error(std::string("bad dyadic literal '") + text + "': " + ex.what());
    }
}

}  // namespace betting
