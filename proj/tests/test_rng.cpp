#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>
#include <vector>

#include <eade/rng.hpp>

using eade::Rng;

TEST_CASE("same seed reproduces the same sequence") {
    Rng a(12345);
    Rng b(12345);
    for (int i = 0; i < 1000; ++i) {
        REQUIRE(a.next_u64() == b.next_u64());
    }
}

TEST_CASE("substreams with different names do not collide") {
    Rng a = Rng::substream(7, "init");
    Rng b = Rng::substream(7, "engine");
    Rng c = Rng::substream(7, "init");
    int differ = 0;
    for (int i = 0; i < 64; ++i) {
        auto va = a.next_u64();
        auto vb = b.next_u64();
        REQUIRE(va == c.next_u64());
        if (va != vb) ++differ;
    }
    REQUIRE(differ > 60);
}

TEST_CASE("uniform stays in [0, 1) with the right mean") {
    Rng rng(1);
    double sum = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
        sum += u;
    }
    REQUIRE_THAT(sum / n, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("ranged uniform respects its bounds") {
    Rng rng(2);
    for (int i = 0; i < 10000; ++i) {
        double u = rng.uniform(-3.0, 5.0);
        REQUIRE(u >= -3.0);
        REQUIRE(u < 5.0);
    }
}

TEST_CASE("uniform_int covers the whole inclusive range") {
    Rng rng(3);
    std::set<int> seen;
    for (int i = 0; i < 10000; ++i) {
        int v = rng.uniform_int(-2, 4);
        REQUIRE(v >= -2);
        REQUIRE(v <= 4);
        seen.insert(v);
    }
    REQUIRE(seen.size() == 7);
}

TEST_CASE("normal matches its first two moments") {
    Rng rng(4);
    const int n = 200000;
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        double x = rng.normal(2.0, 3.0);
        sum += x;
        sq += x * x;
    }
    double mean = sum / n;
    double var = sq / n - mean * mean;
    REQUIRE_THAT(mean, Catch::Matchers::WithinAbs(2.0, 0.05));
    REQUIRE_THAT(std::sqrt(var), Catch::Matchers::WithinAbs(3.0, 0.05));
}

TEST_CASE("cauchy is centered on its location") {
    Rng rng(5);
    const int n = 200000;
    int below = 0;
    for (int i = 0; i < n; ++i) {
        if (rng.cauchy(0.5, 0.1) < 0.5) ++below;
    }
    REQUIRE_THAT(static_cast<double>(below) / n, Catch::Matchers::WithinAbs(0.5, 0.01));
}

TEST_CASE("bernoulli tracks its probability") {
    Rng rng(6);
    const int n = 100000;
    int hits = 0;
    for (int i = 0; i < n; ++i) {
        if (rng.bernoulli(0.3)) ++hits;
    }
    REQUIRE_THAT(static_cast<double>(hits) / n, Catch::Matchers::WithinAbs(0.3, 0.01));
}
