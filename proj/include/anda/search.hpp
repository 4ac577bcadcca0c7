#pragma once

// Adaptive precision combination search: a priority queue ordered by BOPs
// seeds with uniform combinations, pops the cheapest unvisited entry, and on
// every accepted improvement relaxes the incumbent by decrementing each
// tensor type's mantissa length by one. Rejected combinations spawn no
// neighbors. A brute-force enumerator serves as the validation oracle.

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <vector>

#include "anda/bops.hpp"
#include "anda/errors.hpp"

namespace anda {

// Accuracy oracle contract: higher is better, deterministic per combination.
// nullopt requests the FP16 baseline evaluation.
using OracleFn = std::function<double(const std::optional<PrecisionCombination>&)>;

// Wraps an oracle so each combination (and the FP16 sentinel) is evaluated
// at most once, no matter how many searches share it.
inline OracleFn make_caching_oracle(OracleFn inner) {
    struct Cache {
        OracleFn inner;
        std::map<PrecisionCombination, double> scores;
        std::optional<double> fp_score;
    };
    auto cache = std::make_shared<Cache>(Cache{std::move(inner), {}, {}});
    return [cache](const std::optional<PrecisionCombination>& c) -> double {
        if (!c) {
            if (!cache->fp_score) cache->fp_score = cache->inner(std::nullopt);
            return *cache->fp_score;
        }
        auto it = cache->scores.find(*c);
        if (it != cache->scores.end()) return it->second;
        const double s = cache->inner(c);
        cache->scores.emplace(*c, s);
        return s;
    };
}

struct SearchConfig {
    double delta = 0.01;           // accuracy loss tolerance
    std::size_t max_iterations = 32;
    int init_lo = 4;               // uniform seeds [lo,lo,lo,lo] .. [hi,hi,hi,hi]
    int init_hi = 13;
    int floor = kMinMantissaLen;   // relaxation never goes below this

    static constexpr std::size_t kUnbounded = static_cast<std::size_t>(-1);
};

struct IterationRecord {
    std::size_t iter = 0;
    PrecisionCombination comb;
    uint64_t bops = 0;
    double score = 0.0;
    bool accepted = false;
};

struct SearchTrace {
    std::vector<IterationRecord> records;
    std::optional<PrecisionCombination> best;
    uint64_t best_bops = 0;
    double fp_score = 0.0;
    std::size_t visited_count = 0;
};

struct SearchResult {
    std::optional<PrecisionCombination> best;
    SearchTrace trace;
};

// Single-decrement neighbors of c, in component order; components already at
// the floor produce no candidate.
inline std::vector<PrecisionCombination> generate_candidates(const PrecisionCombination& c,
                                                             int floor = kMinMantissaLen) {
    std::vector<PrecisionCombination> out;
    for (std::size_t i = 0; i < 4; ++i) {
        if (c[i] > floor) {
            PrecisionCombination n = c;
            n[i] -= 1;
            out.push_back(n);
        }
    }
    return out;
}

namespace detail {

inline double checked_eval(const OracleFn& oracle, const std::optional<PrecisionCombination>& c) {
    double score;
    try {
        score = oracle(c);
    } catch (const OracleFailure&) {
        throw;
    } catch (const std::exception& e) {
        throw OracleFailure(std::string("oracle failed at ") + (c ? c->str() : "fp16") + ": " + e.what());
    }
    if (!std::isfinite(score))
        throw NonFiniteScore("oracle returned non-finite score at " + (c ? c->str() : std::string("fp16")));
    return score;
}

} // namespace detail

inline SearchResult search(const ModelShape& shape, const OracleFn& oracle, const SearchConfig& cfg) {
    if (cfg.init_lo > cfg.init_hi || cfg.max_iterations < 1 || cfg.floor < kMinMantissaLen)
        throw Error("invalid SearchConfig");

    // Ordered by (BOPs, lexicographic tuple); doubles as the dedup set.
    using Entry = std::pair<uint64_t, PrecisionCombination>;
    std::set<Entry> queue;
    for (int v = cfg.init_lo; v <= cfg.init_hi; ++v) {
        const auto c = PrecisionCombination::uniform(v);
        queue.emplace(eval_bops(c, shape), c);
    }

    SearchResult res;
    res.trace.fp_score = detail::checked_eval(oracle, std::nullopt);
    const double threshold = (1.0 - cfg.delta) * res.trace.fp_score;

    std::set<PrecisionCombination> visited;
    uint64_t best_bops = 0;
    bool have_best = false;

    std::size_t iterations = 0;
    while (iterations < cfg.max_iterations && !queue.empty()) {
        const Entry entry = *queue.begin();
        queue.erase(queue.begin());
        const PrecisionCombination comb = entry.second;
        visited.insert(comb);

        const double score = detail::checked_eval(oracle, comb);
        const bool accepted = (!have_best || entry.first < best_bops) && score >= threshold;
        res.trace.records.push_back({iterations, comb, entry.first, score, accepted});

        if (accepted) {
            res.best = comb;
            best_bops = entry.first;
            have_best = true;
            for (const PrecisionCombination& n : generate_candidates(comb, cfg.floor))
                if (!visited.contains(n)) queue.emplace(eval_bops(n, shape), n);
        }
        ++iterations;
    }

    res.trace.best = res.best;
    res.trace.best_bops = best_bops;
    res.trace.visited_count = visited.size();
    return res;
}

// Exhaustive enumeration over [lo,hi]^4, minimum BOPs with lexicographic
// tie-break. Test/validation oracle only; cost grows as (hi-lo+1)^4.
inline std::optional<PrecisionCombination> brute_force(const ModelShape& shape, const OracleFn& oracle,
                                                       double delta, int lo, int hi) {
    const double fp_score = detail::checked_eval(oracle, std::nullopt);
    const double threshold = (1.0 - delta) * fp_score;
    std::optional<PrecisionCombination> best;
    uint64_t best_bops = 0;
    for (int a = lo; a <= hi; ++a)
        for (int b = lo; b <= hi; ++b)
            for (int c = lo; c <= hi; ++c)
                for (int d = lo; d <= hi; ++d) {
                    const PrecisionCombination comb{{a, b, c, d}};
                    if (detail::checked_eval(oracle, comb) < threshold) continue;
                    const uint64_t bops = eval_bops(comb, shape);
                    if (!best || bops < best_bops || (bops == best_bops && comb < *best)) {
                        best = comb;
                        best_bops = bops;
                    }
                }
    return best;
}

// JSON-lines trace export: one object per iteration.
inline void trace_to_jsonl(const SearchTrace& trace, std::ostream& os) {
    for (const IterationRecord& r : trace.records) {
        nlohmann::json j;
        j["iter"] = r.iter;
        j["comb"] = r.comb.m;
        j["bops"] = r.bops;
        j["score"] = r.score;
        j["accepted"] = r.accepted;
        os << j.dump() << "\n";
    }
}

} // namespace anda
