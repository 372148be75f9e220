#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace eade::stats {

inline double mean(const std::vector<double>& v) {
    if (v.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double sample_stddev(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v);
    double ss = 0.0;
    for (double x : v) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

inline double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty sample");
    std::sort(v.begin(), v.end());
    auto n = v.size();
    return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// 1-based ascending ranks with ties averaged.
inline std::vector<double> ranks_with_ties(const std::vector<double>& values) {
    auto n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos;
        while (end + 1 < n && values[idx[end + 1]] == values[idx[pos]]) ++end;
        double avg = 0.5 * static_cast<double>(pos + 1 + end + 1);
        for (std::size_t k = pos; k <= end; ++k) ranks[idx[k]] = avg;
        pos = end + 1;
    }
    return ranks;
}

enum class Comparison { Better, Similar, Worse };

inline const char* comparison_mark(Comparison c) {
    switch (c) {
        case Comparison::Better: return "+";
        case Comparison::Similar: return "=";
        case Comparison::Worse: return "-";
    }
    throw std::invalid_argument("unknown comparison");
}

struct WilcoxonResult {
    Comparison verdict = Comparison::Similar;  // first sample vs second, lower is better
    double p_value = 1.0;
    double w_plus = 0.0;
    double w_minus = 0.0;
    int n_effective = 0;   // pairs left after dropping zero differences
    bool low_sample = false;  // too few pairs to ever reach significance
};

namespace detail {

inline double normal_cdf(double z) {
    return 0.5 * std::erfc(-z / std::sqrt(2.0));
}

// P(W <= w) for the signed-rank statistic under the null, by enumerating
// subset rank sums. Ranks are doubled so tie-averaged half-integer ranks
// stay exact integers.
inline double exact_signed_rank_cdf(const std::vector<double>& ranks, double w) {
    std::vector<long long> r2;
    long long total2 = 0;
    r2.reserve(ranks.size());
    for (double r : ranks) {
        auto v = static_cast<long long>(std::llround(2.0 * r));
        r2.push_back(v);
        total2 += v;
    }
    std::vector<double> count(static_cast<std::size_t>(total2) + 1, 0.0);
    count[0] = 1.0;
    long long reach = 0;
    for (long long v : r2) {
        reach += v;
        for (long long s = reach; s >= v; --s) {
            count[static_cast<std::size_t>(s)] += count[static_cast<std::size_t>(s - v)];
        }
    }
    auto w2 = static_cast<long long>(std::floor(2.0 * w + 0.5));
    w2 = std::min(w2, total2);
    double acc = 0.0;
    for (long long s = 0; s <= w2; ++s) acc += count[static_cast<std::size_t>(s)];
    return acc / std::ldexp(1.0, static_cast<int>(ranks.size()));
}

}  // namespace detail

// Two-sided paired Wilcoxon signed-rank test. Zero differences are dropped,
// tied magnitudes share averaged ranks. Small samples (n <= exact_cutoff)
// use the exact null distribution; larger ones the normal approximation with
// tie-corrected variance and continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a,
                                           const std::vector<double>& b, double alpha = 0.05,
                                           int exact_cutoff = 20) {
    if (a.size() != b.size()) throw std::invalid_argument("paired samples must align");
    std::vector<double> diffs;
    diffs.reserve(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d != 0.0) diffs.push_back(d);
    }

    WilcoxonResult res;
    res.n_effective = static_cast<int>(diffs.size());
    int n = res.n_effective;
    res.low_sample = n == 0 || (n < 64 && std::ldexp(2.0, -n) > alpha);
    if (n == 0) return res;

    std::vector<double> mags(diffs.size());
    for (std::size_t i = 0; i < diffs.size(); ++i) mags[i] = std::fabs(diffs[i]);
    auto ranks = ranks_with_ties(mags);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0.0) {
            res.w_plus += ranks[i];
        } else {
            res.w_minus += ranks[i];
        }
    }

    double w = std::min(res.w_plus, res.w_minus);
    if (n <= exact_cutoff) {
        res.p_value = std::min(1.0, 2.0 * detail::exact_signed_rank_cdf(ranks, w));
    } else {
        double nn = static_cast<double>(n);
        double mu = nn * (nn + 1.0) / 4.0;
        double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0;
        std::vector<double> sorted(mags);
        std::sort(sorted.begin(), sorted.end());
        std::size_t pos = 0;
        while (pos < sorted.size()) {
            std::size_t end = pos;
            while (end + 1 < sorted.size() && sorted[end + 1] == sorted[pos]) ++end;
            double t = static_cast<double>(end - pos + 1);
            var -= (t * t * t - t) / 48.0;
            pos = end + 1;
        }
        double z = (w - mu + 0.5) / std::sqrt(var);
        res.p_value = std::min(1.0, 2.0 * detail::normal_cdf(z));
    }

    if (res.p_value < alpha && res.w_plus != res.w_minus) {
        // Negative differences dominating means the first sample is lower.
        res.verdict = res.w_minus > res.w_plus ? Comparison::Better : Comparison::Worse;
    }
    return res;
}

// Mean rank per algorithm across problems. `means[algo][problem]` holds the
// aggregated score; lower scores rank better, ties share averaged ranks.
inline std::vector<double> average_rank(const std::vector<std::vector<double>>& means) {
    if (means.empty()) throw std::invalid_argument("average_rank of empty table");
    auto n_problems = means.front().size();
    if (n_problems == 0) throw std::invalid_argument("average_rank needs at least one problem");
    for (const auto& row : means) {
        if (row.size() != n_problems) throw std::invalid_argument("ragged score table");
        for (double v : row) {
            if (!std::isfinite(v)) throw std::invalid_argument("non-finite score");
        }
    }
    std::vector<double> acc(means.size(), 0.0);
    std::vector<double> column(means.size());
    for (std::size_t p = 0; p < n_problems; ++p) {
        for (std::size_t a = 0; a < means.size(); ++a) column[a] = means[a][p];
        auto ranks = ranks_with_ties(column);
        for (std::size_t a = 0; a < means.size(); ++a) acc[a] += ranks[a];
    }
    for (auto& v : acc) v /= static_cast<double>(n_problems);
    return acc;
}

}  // namespace eade::stats
