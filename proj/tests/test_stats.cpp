#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include <eade/rng.hpp>
#include <eade/stats.hpp>

using namespace eade;
using namespace eade::stats;

namespace {

// Brute-force two-sided signed-rank p-value: enumerate every sign
// assignment. Keeps its own ranking code so the test does not reuse the
// implementation under scrutiny.
double brute_force_p(const std::vector<double>& a, const std::vector<double>& b) {
    std::vector<double> mags;
    std::vector<int> signs;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        if (d == 0.0) continue;
        mags.push_back(std::fabs(d));
        signs.push_back(d > 0.0 ? 1 : -1);
    }
    auto n = mags.size();
    if (n == 0) return 1.0;

    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t x, std::size_t y) { return mags[x] < mags[y]; });
    std::vector<double> rank(n);
    std::size_t pos = 0;
    while (pos < n) {
        std::size_t end = pos;
        while (end + 1 < n && mags[idx[end + 1]] == mags[idx[pos]]) ++end;
        for (std::size_t k = pos; k <= end; ++k) {
            rank[idx[k]] = 0.5 * static_cast<double>(pos + end) + 1.0;
        }
        pos = end + 1;
    }

    double w_plus = 0.0, w_minus = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        (signs[i] > 0 ? w_plus : w_minus) += rank[i];
    }
    double w_obs = std::min(w_plus, w_minus);

    long long hits = 0;
    long long total = 1LL << n;
    for (long long mask = 0; mask < total; ++mask) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1LL << i)) w += rank[i];
        }
        if (w <= w_obs + 1e-9) ++hits;
    }
    return std::min(1.0, 2.0 * static_cast<double>(hits) / static_cast<double>(total));
}

}  // namespace

TEST_CASE("basic aggregations") {
    REQUIRE(mean({1.0, 2.0, 3.0, 6.0}) == 3.0);
    REQUIRE(median({5.0, 1.0, 3.0}) == 3.0);
    REQUIRE(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
    REQUIRE_THAT(sample_stddev({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0}),
                 Catch::Matchers::WithinRel(std::sqrt(32.0 / 7.0), 1e-12));
    REQUIRE(sample_stddev({3.0}) == 0.0);
    REQUIRE_THROWS_AS(mean({}), std::invalid_argument);
    REQUIRE_THROWS_AS(median({}), std::invalid_argument);
}

TEST_CASE("tied values share averaged ranks") {
    auto r = ranks_with_ties({3.0, 1.0, 4.0, 1.0, 5.0});
    REQUIRE(r == std::vector<double>{3.0, 1.5, 4.0, 1.5, 5.0});
    auto all_tied = ranks_with_ties({2.0, 2.0, 2.0});
    REQUIRE(all_tied == std::vector<double>{2.0, 2.0, 2.0});
}

TEST_CASE("signed-rank test on a hand-computed example") {
    // Differences 1, 2, 3, 4, 5, -1: the two unit magnitudes share rank 1.5,
    // so W- = 1.5 and W+ = 19.5. Exact two-sided p = 2 * 3/64.
    std::vector<double> b(6, 0.0);
    std::vector<double> a{1.0, 2.0, 3.0, 4.0, 5.0, -1.0};
    auto res = wilcoxon_signed_rank(a, b);
    REQUIRE(res.n_effective == 6);
    REQUIRE(res.w_minus == 1.5);
    REQUIRE(res.w_plus == 19.5);
    REQUIRE_THAT(res.p_value, Catch::Matchers::WithinRel(0.09375, 1e-12));
    REQUIRE(res.verdict == Comparison::Similar);
    REQUIRE_FALSE(res.low_sample);
}

TEST_CASE("six one-sided differences are significant, five are not") {
    std::vector<double> base(6, 0.0);
    std::vector<double> up{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    auto res = wilcoxon_signed_rank(up, base);
    REQUIRE_THAT(res.p_value, Catch::Matchers::WithinRel(2.0 / 64.0, 1e-12));
    REQUIRE(res.verdict == Comparison::Worse);  // larger values lose under minimization

    auto mirrored = wilcoxon_signed_rank(base, up);
    REQUIRE(mirrored.verdict == Comparison::Better);
    REQUIRE(mirrored.p_value == res.p_value);

    std::vector<double> short_base(5, 0.0);
    std::vector<double> short_up{1.0, 2.0, 3.0, 4.0, 5.0};
    auto weak = wilcoxon_signed_rank(short_up, short_base);
    REQUIRE_THAT(weak.p_value, Catch::Matchers::WithinRel(2.0 / 32.0, 1e-12));
    REQUIRE(weak.verdict == Comparison::Similar);
    REQUIRE(weak.low_sample);  // n = 5 can never beat alpha = 0.05
}

TEST_CASE("a single opposite difference at rank two is still significant at n = 7") {
    std::vector<double> b(7, 0.0);
    std::vector<double> a{1.0, -2.0, 3.0, 4.0, 5.0, 6.0, 7.0};
    auto res = wilcoxon_signed_rank(a, b);
    REQUIRE(res.w_minus == 2.0);
    REQUIRE_THAT(res.p_value, Catch::Matchers::WithinRel(6.0 / 128.0, 1e-12));
    REQUIRE(res.verdict == Comparison::Worse);
}

TEST_CASE("zero differences are dropped before ranking") {
    std::vector<double> a{1.0, 2.0, 3.0, 4.0};
    std::vector<double> b{1.0, 2.0, 2.0, 5.0};
    auto res = wilcoxon_signed_rank(a, b);
    REQUIRE(res.n_effective == 2);
    REQUIRE(res.low_sample);

    auto all_equal = wilcoxon_signed_rank(a, a);
    REQUIRE(all_equal.n_effective == 0);
    REQUIRE(all_equal.p_value == 1.0);
    REQUIRE(all_equal.verdict == Comparison::Similar);
}

TEST_CASE("exact p-values agree with full enumeration on random small cases") {
    Rng rng(77);
    int checked = 0;
    while (checked < 60) {
        int n = rng.uniform_int(4, 10);
        std::vector<double> a, b;
        for (int i = 0; i < n; ++i) {
            // Small integer lattice: plenty of ties and occasional zeros.
            a.push_back(rng.uniform_int(0, 6));
            b.push_back(rng.uniform_int(0, 6));
        }
        auto res = wilcoxon_signed_rank(a, b);
        if (res.n_effective == 0) continue;
        double expect = brute_force_p(a, b);
        REQUIRE_THAT(res.p_value, Catch::Matchers::WithinAbs(expect, 1e-12));
        ++checked;
    }
}

TEST_CASE("the large-sample approximation tracks the exact distribution") {
    Rng rng(78);
    std::vector<double> a, b;
    for (int i = 0; i < 30; ++i) {
        a.push_back(rng.uniform(0.0, 1.0));
        b.push_back(rng.uniform(0.0, 1.0) + 0.15);
    }
    auto exact = wilcoxon_signed_rank(a, b, 0.05, 64);
    auto approx = wilcoxon_signed_rank(a, b, 0.05, 0);
    REQUIRE_THAT(approx.p_value, Catch::Matchers::WithinAbs(exact.p_value, 0.01));
    REQUIRE(exact.verdict == approx.verdict);
}

TEST_CASE("mismatched sample lengths are rejected") {
    REQUIRE_THROWS_AS(wilcoxon_signed_rank({1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("average ranks across problems") {
    // Three algorithms scored on two problems; per-problem ranks are
    // (1, 3, 2) and (2, 1, 3).
    std::vector<std::vector<double>> means{{1.0, 2.0}, {3.0, 1.0}, {2.0, 3.0}};
    auto ranks = average_rank(means);
    REQUIRE(ranks == std::vector<double>{1.5, 2.0, 2.5});

    std::vector<std::vector<double>> tied{{1.0, 1.0}, {1.0, 1.0}};
    REQUIRE(average_rank(tied) == std::vector<double>{1.5, 1.5});

    REQUIRE_THROWS_AS(average_rank({}), std::invalid_argument);
    REQUIRE_THROWS_AS(average_rank({{1.0, 2.0}, {1.0}}), std::invalid_argument);
    REQUIRE_THROWS_AS(average_rank({{1.0, std::nan("")}}), std::invalid_argument);
}
