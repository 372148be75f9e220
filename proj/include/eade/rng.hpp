#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace eade {

// Deterministic random source. All distributions are derived from the raw
// 64-bit stream by hand so that a given (seed, stream name) pair yields the
// same draw sequence on every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent child stream, decorrelated from the parent seed by name.
    // Used to keep initialization, search, scheduling, and instrumentation
    // draws from interleaving with each other.
    static Rng substream(std::uint64_t master_seed, std::string_view name) {
        return Rng(mix64(master_seed ^ hash_name(name)));
    }

    std::uint64_t next_u64() { return gen_(); }

    // Uniform draw in [0, 1).
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform();
    }

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(gen_() % span);
    }

    bool bernoulli(double p) { return uniform() < p; }

    double normal(double mean, double stddev) {
        // Box-Muller, cosine branch only.
        double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
        double u2 = uniform();
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
        return mean + stddev * z;
    }

    double cauchy(double location, double scale) {
        double u = uniform();
        return location + scale * std::tan(pi * (u - 0.5));
    }

private:
    static constexpr double pi = 3.141592653589793238462643383279502884;
    static constexpr double two_pi = 2.0 * pi;

    static std::uint64_t hash_name(std::string_view name) {
        // FNV-1a.
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (char c : name) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        return h;
    }

    static std::uint64_t mix64(std::uint64_t x) {
        // splitmix64 finalizer.
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 gen_;
};

}  // namespace eade
