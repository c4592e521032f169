#include "betting/schedule.hpp"

#include <bit>
#include <charconv>

namespace betting {

namespace {

int64_t parse_nat(std::string_view text, const std::string& spec) {
    int64_t v = 0;
    auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc() || p != text.data() + text.size() || v < 0)
        throw Error("bad schedule spec '" + spec + "': expected a natural number");
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> parts;
    size_t start = 0;
    while (true) {
        size_t pos = s.find(sep, start);
        parts.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return parts;
}

}  // namespace

WagerSchedule WagerSchedule::parse(const std::string& spec, int64_t horizon) {
    if (horizon < 0) throw Error("schedule horizon must be nonnegative");
    WagerSchedule g;
    g.spec_ = spec;
    g.horizon_ = horizon;
    std::string_view s(spec);
    auto colon = s.find(':');
    std::string_view head = s.substr(0, colon);
    std::string_view rest = colon == std::string_view::npos ? std::string_view() : s.substr(colon + 1);
    if (head == "const") {
        g.kind_ = Kind::Const;
        g.k_ = parse_nat(rest, spec);
    } else if (head == "linear") {
        g.kind_ = Kind::Linear;
        auto parts = split(rest, ':');
        if (parts.size() != 2) throw Error("bad schedule spec '" + spec + "': linear:<a>:<b>");
        g.a_ = parse_nat(parts[0], spec);
        g.b_ = parse_nat(parts[1], spec);
    } else if (head == "log2ceil") {
        g.kind_ = Kind::Log2Ceil;
        g.m_ = parse_nat(rest, spec);
    } else if (head == "table") {
        g.kind_ = Kind::Table;
        if (rest.empty()) throw Error("bad schedule spec '" + spec + "': empty table");
        for (auto part : split(rest, ',')) g.table_.push_back(parse_nat(part, spec));
        for (size_t i = 1; i < g.table_.size(); ++i)
            if (g.table_[i] < g.table_[i - 1])
                throw Error("bad schedule spec '" + spec + "': table must be nondecreasing");
    } else {
        throw Error("bad schedule spec '" + spec + "'");
    }
    return g;
}

int64_t WagerSchedule::base_eval(int64_t n) const {
    switch (kind_) {
        case Kind::Const:
            return k_;
        case Kind::Linear:
            return a_ * n + b_;
        case Kind::Log2Ceil:
            // ceil(log2(n+2)) == bit_width(n+1) for n >= 0
            return m_ * static_cast<int64_t>(std::bit_width(static_cast<uint64_t>(n + 1)));
        case Kind::Table:
            return n < static_cast<int64_t>(table_.size()) ? table_[static_cast<size_t>(n)]
                                                           : table_.back();
    }
    throw Error("unreachable schedule kind");
}

int64_t WagerSchedule::eval(int64_t n) const {
    if (n < 0 || n > horizon_) throw Error("schedule exhausted");
    return base_eval(n) + offset_;
}

WagerSchedule WagerSchedule::successor() const {
    WagerSchedule g = *this;
    g.offset_ += 1;
    return g;
}

Dyadic WagerSchedule::partial_sum(int64_t n, bool halved) const {
    Dyadic sum;
    for (int64_t i = 0; i <= n; ++i) sum = sum + Dyadic(1, eval(i) + (halved ? 1 : 0));
    return sum;
}

const Dyadic& PartialSums::upto(int64_t n) {
    if (n < 0) throw Error("partial sum index must be nonnegative");
    while (static_cast<int64_t>(memo_.size()) <= n) {
        int64_t i = static_cast<int64_t>(memo_.size());
        Dyadic term(1, g_.eval(i) + (halved_ ? 1 : 0));
        memo_.push_back(i == 0 ? term : memo_.back() + term);
    }
    return memo_[static_cast<size_t>(n)];
}

}  // namespace betting
