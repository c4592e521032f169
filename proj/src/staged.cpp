#include "betting/staged.hpp"

namespace betting {

Dyadic Stage::tail_sum(int64_t n) const {
    Dyadic f;
    for (size_t i = static_cast<size_t>(n); i < tail.size(); ++i) f = f + tail[i];
    return f;
}

Dyadic Stage::full(int64_t level, uint64_t index) const {
    return hat.at(level, index) + tail_sum(level);
}

bool StagedSupermartingale::strongly_granular() const {
    for (const auto& st : stages)
        for (const auto& q : st.tail)
            if (!q.is_zero()) return false;
    return true;
}

Report staged_validate(const StagedSupermartingale& s) {
    if (s.stages.empty()) throw Error("empty stage list");
    if (s.g.horizon() < s.depth) throw Error("schedule exhausted");
    for (size_t si = 0; si < s.stages.size(); ++si) {
        const Stage& st = s.stages[si];
        if (st.hat.depth != s.depth)
            return Report::fail("stage " + std::to_string(si) + " has mismatched depth");
        Report gr = check_granularity(st.hat, s.g);
        if (!gr) return Report::fail("stage " + std::to_string(si) + ": " + gr.detail);

        // Supermartingale on full values; the tail contributes 2 f(n) - 2 f(n+1) >= 0
        // of slack at level n, so the check runs on hat + tail explicitly.
        for (int64_t n = 0; n < s.depth; ++n) {
            Dyadic fp = st.tail_sum(n) + st.tail_sum(n);
            Dyadic fc = st.tail_sum(n + 1) + st.tail_sum(n + 1);
            for (uint64_t i = 0; i < (uint64_t(1) << n); ++i) {
                Dyadic lhs = st.hat.at(n + 1, 2 * i) + st.hat.at(n + 1, 2 * i + 1) + fc;
                Dyadic rhs = st.hat.at(n, i) + st.hat.at(n, i) + fp;
                if (lhs > rhs)
                    return Report::fail("supermartingale at '" +
                                        BitString::from_level_index(n, i).str() + "' (stage " +
                                        std::to_string(si) + ")");
            }
        }
        if (si > 0) {
            const Stage& prev = s.stages[si - 1];
            for (int64_t n = 0; n <= s.depth; ++n)
                for (uint64_t i = 0; i < (uint64_t(1) << n); ++i)
                    if (st.hat.at(n, i) < prev.hat.at(n, i))
                        return Report::fail("monotonicity at ('" +
                                            BitString::from_level_index(n, i).str() + "', stage " +
                                            std::to_string(si) + ")");
        }
    }
    return Report::ok();
}

json staged_to_json(const StagedSupermartingale& s) {
    json stages = json::array();
    for (const auto& st : s.stages) {
        json tail = json::array();
        for (const auto& q : st.tail) tail.push_back(dyadic_to_json(q));
        stages.push_back(json{{"hat", table_to_json(st.hat)}, {"tail", tail}});
    }
    return json{{"schedule", schedule_to_json(s.g)}, {"depth", s.depth}, {"stages", stages}};
}

StagedSupermartingale staged_from_json(const json& j) {
    StagedSupermartingale s{schedule_from_json(j.at("schedule")), j.at("depth").get<int64_t>(), {}};
    for (const auto& stj : j.at("stages")) {
        Stage st;
        st.hat = table_from_json(stj.at("hat"));
        for (const auto& qj : stj.at("tail")) st.tail.push_back(dyadic_from_json(qj));
        s.stages.push_back(std::move(st));
    }
    if (s.stages.empty()) throw Error("empty stage list");
    return s;
}

}  // namespace betting
