#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eade/bench.hpp"
#include "eade/core.hpp"
#include "eade/rng.hpp"

namespace eade::engines {

enum class EngineKind { Shade, Cip };

enum class StrategyLabel { S1, S2, S3 };

inline const char* label_name(StrategyLabel label) {
    switch (label) {
        case StrategyLabel::S1: return "S1";
        case StrategyLabel::S2: return "S2";
        case StrategyLabel::S3: return "S3";
    }
    throw std::invalid_argument("unknown strategy label");
}

inline StrategyLabel label_from_name(const std::string& name) {
    if (name == "S1") return StrategyLabel::S1;
    if (name == "S2") return StrategyLabel::S2;
    if (name == "S3") return StrategyLabel::S3;
    throw std::invalid_argument("unknown strategy label: " + name);
}

// A search strategy is an engine plus a greediness degree for the similarity
// selection rule. S1 is the balanced default, S2 leans explorative, S3
// exploitative.
struct Strategy {
    EngineKind engine = EngineKind::Shade;
    double greedy_degree = 0.5;
    StrategyLabel label = StrategyLabel::S1;
};

inline Strategy strategy_for(StrategyLabel label) {
    switch (label) {
        case StrategyLabel::S1: return {EngineKind::Shade, 0.5, label};
        case StrategyLabel::S2: return {EngineKind::Shade, 0.1, label};
        case StrategyLabel::S3: return {EngineKind::Cip, 0.9, label};
    }
    throw std::invalid_argument("unknown strategy label");
}

// current-to-pbest/1 donor with external archive:
//   v = x_i + F (x_pbest - x_i) + F (x_r1 - x_r2)
// x_pbest is drawn from the top max(2, round(p NP)) members, r1 from the
// population, r2 from population plus archive, all distinct from i and r1.
inline std::vector<double> donor_current_to_pbest(int i, const core::Population& pop,
                                                  const std::vector<int>& order,
                                                  const core::Archive& archive, double f,
                                                  double p_fraction, Rng& rng) {
    int np = pop.size();
    if (np + archive.size() < 3) throw std::invalid_argument("population too small for donor");
    int pbest_count = std::max(2, static_cast<int>(std::lround(p_fraction * np)));
    pbest_count = std::min(pbest_count, np);
    int pbest = order[static_cast<std::size_t>(rng.uniform_int(0, pbest_count - 1))];

    int r1;
    do {
        r1 = rng.uniform_int(0, np - 1);
    } while (r1 == i);
    int r2;
    do {
        r2 = rng.uniform_int(0, np + archive.size() - 1);
    } while (r2 == i || r2 == r1);

    const auto& xi = pop.members[static_cast<std::size_t>(i)].x;
    const auto& xp = pop.members[static_cast<std::size_t>(pbest)].x;
    const auto& x1 = pop.members[static_cast<std::size_t>(r1)].x;
    const auto& x2 = r2 < np ? pop.members[static_cast<std::size_t>(r2)].x
                             : archive.entries[static_cast<std::size_t>(r2 - np)];

    std::vector<double> v(xi.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = xi[j] + f * (xp[j] - xi[j]) + f * (x1[j] - x2[j]);
    }
    return v;
}

// Rank-weighted centroid of the t best members, with log-linear weights
// w_j proportional to ln(t+1) - ln(j).
inline std::vector<double> collective_base(const core::Population& pop,
                                           const std::vector<int>& order, int t) {
    if (t < 1 || t > pop.size()) throw std::invalid_argument("collective base size out of range");
    double log_t1 = std::log(static_cast<double>(t) + 1.0);
    double total = 0.0;
    std::vector<double> w(static_cast<std::size_t>(t));
    for (int j = 1; j <= t; ++j) {
        w[static_cast<std::size_t>(j - 1)] = log_t1 - std::log(static_cast<double>(j));
        total += w[static_cast<std::size_t>(j - 1)];
    }
    std::vector<double> cb(pop.members[0].x.size(), 0.0);
    for (int j = 0; j < t; ++j) {
        const auto& xj = pop.members[static_cast<std::size_t>(order[static_cast<std::size_t>(j)])].x;
        double wj = w[static_cast<std::size_t>(j)] / total;
        for (std::size_t c = 0; c < cb.size(); ++c) cb[c] += wj * xj[c];
    }
    return cb;
}

// Collective-guidance donor:
//   v = x_i + F (x_cb - x_i) + F (x_r1 - x_r2)
// where x_cb is the rank-weighted centroid of the top max(2, ceil(0.11 NP)).
inline std::vector<double> donor_cip(int i, const core::Population& pop,
                                     const std::vector<int>& order, const core::Archive& archive,
                                     double f, Rng& rng) {
    int np = pop.size();
    if (np + archive.size() < 3) throw std::invalid_argument("population too small for donor");
    int t = std::max(2, static_cast<int>(std::ceil(0.11 * np)));
    t = std::min(t, np);
    auto cb = collective_base(pop, order, t);

    int r1;
    do {
        r1 = rng.uniform_int(0, np - 1);
    } while (r1 == i);
    int r2;
    do {
        r2 = rng.uniform_int(0, np + archive.size() - 1);
    } while (r2 == i || r2 == r1);

    const auto& xi = pop.members[static_cast<std::size_t>(i)].x;
    const auto& x1 = pop.members[static_cast<std::size_t>(r1)].x;
    const auto& x2 = r2 < np ? pop.members[static_cast<std::size_t>(r2)].x
                             : archive.entries[static_cast<std::size_t>(r2 - np)];

    std::vector<double> v(xi.size());
    for (std::size_t j = 0; j < v.size(); ++j) {
        v[j] = xi[j] + f * (cb[j] - xi[j]) + f * (x1[j] - x2[j]);
    }
    return v;
}

inline std::vector<double> crossover_binomial(const std::vector<double>& x,
                                              const std::vector<double>& v, double cr, Rng& rng) {
    auto d = static_cast<int>(x.size());
    int jrand = rng.uniform_int(0, d - 1);
    std::vector<double> u(x);
    for (int j = 0; j < d; ++j) {
        if (j == jrand || rng.uniform() < cr) u[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(j)];
    }
    return u;
}

// Exponential crossover: one contiguous (wrapping) donor segment starting at
// a random position, extended while the CR coin keeps coming up.
inline std::vector<double> crossover_exponential(const std::vector<double>& x,
                                                 const std::vector<double>& v, double cr,
                                                 Rng& rng) {
    auto d = static_cast<int>(x.size());
    int start = rng.uniform_int(0, d - 1);
    std::vector<double> u(x);
    int len = 0;
    do {
        auto j = static_cast<std::size_t>((start + len) % d);
        u[j] = v[j];
        ++len;
    } while (len < d && rng.uniform() < cr);
    return u;
}

// Per-offspring coin flip between binomial and exponential crossover.
inline std::vector<double> crossover_hybrid(const std::vector<double>& x,
                                            const std::vector<double>& v, double cr, Rng& rng) {
    return rng.bernoulli(0.5) ? crossover_binomial(x, v, cr, rng)
                              : crossover_exponential(x, v, cr, rng);
}

struct CandidatePair {
    std::array<std::vector<double>, 2> u;
    std::array<core::DEParams, 2> params;
};

// Two independent repaired trial vectors for member i under one strategy.
// Both are generated, only the one the similarity rule picks gets evaluated.
inline CandidatePair scss_candidates(int i, const Strategy& strategy, const core::Population& pop,
                                     const std::vector<int>& order, const core::Archive& archive,
                                     const core::ParamMemory& mem, const bench::ObjectiveSpec& spec,
                                     Rng& rng) {
    const auto& parent = pop.members[static_cast<std::size_t>(i)].x;
    CandidatePair pair;
    for (int c = 0; c < 2; ++c) {
        auto p = core::sample_parameters(mem, rng);
        std::vector<double> donor;
        if (strategy.engine == EngineKind::Shade) {
            donor = donor_current_to_pbest(i, pop, order, archive, p.f, 0.11, rng);
        } else {
            donor = donor_cip(i, pop, order, archive, p.f, rng);
        }
        donor = core::repair_bounds(std::move(donor), parent, spec);
        auto u = strategy.engine == EngineKind::Shade
                     ? crossover_binomial(parent, donor, p.cr, rng)
                     : crossover_hybrid(parent, donor, p.cr, rng);
        pair.u[static_cast<std::size_t>(c)] = std::move(u);
        pair.params[static_cast<std::size_t>(c)] = p;
    }
    return pair;
}

namespace detail {

inline double sq_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        double dj = a[j] - b[j];
        s += dj * dj;
    }
    return s;
}

}  // namespace detail

// Similarity selection: with probability 1 - rank / (2 GD NP) (clipped to
// [0, 1]) keep the candidate closer to the parent, otherwise the farther one.
// Better-ranked parents and higher greediness both favor the closer child.
inline int similarity_select(const std::vector<double>& parent, int rank, int np, double gd,
                             const CandidatePair& pair, Rng& rng) {
    double d0 = detail::sq_distance(parent, pair.u[0]);
    double d1 = detail::sq_distance(parent, pair.u[1]);
    bool pick_close = rng.uniform() * 2.0 * gd > static_cast<double>(rank) / np;
    if (pick_close) return d0 <= d1 ? 0 : 1;
    return d0 <= d1 ? 1 : 0;
}

struct OffspringDraw {
    std::vector<double> u;
    core::DEParams params;
};

// Generation phase one: every member's selected trial vector, produced from a
// fixed snapshot of the population and archive, none of them evaluated yet.
inline std::vector<OffspringDraw> sample_offspring(const core::Population& pop,
                                                   const std::vector<int>& ranks,
                                                   const std::vector<int>& order,
                                                   const core::Archive& archive,
                                                   const core::ParamMemory& mem,
                                                   const Strategy& strategy,
                                                   const bench::ObjectiveSpec& spec, Rng& rng) {
    int np = pop.size();
    std::vector<OffspringDraw> draws;
    draws.reserve(static_cast<std::size_t>(np));
    for (int i = 0; i < np; ++i) {
        auto pair = scss_candidates(i, strategy, pop, order, archive, mem, spec, rng);
        int pick = similarity_select(pop.members[static_cast<std::size_t>(i)].x,
                                     ranks[static_cast<std::size_t>(i)], np,
                                     strategy.greedy_degree, pair, rng);
        auto idx = static_cast<std::size_t>(pick);
        draws.push_back({std::move(pair.u[idx]), pair.params[idx]});
    }
    return draws;
}

struct GenerationResult {
    std::vector<int> ranks;       // ranks at generation start, aligned with delta_f
    std::vector<double> delta_f;  // per-member fitness gain, zero when not improved
    int evaluations = 0;
    bool partial = false;         // budget ran out before every member was processed
};

// One full generation: sample all offspring from the start-of-generation
// snapshot, then evaluate and greedily select member by member, charging one
// evaluation per processed member. Ends with the success-history update and
// the scheduled population-size reduction.
inline GenerationResult generation_step(core::Population& pop, core::Archive& archive,
                                        core::ParamMemory& mem, const Strategy& strategy,
                                        core::EvalBudget& budget, const core::RunLimits& limits,
                                        Rng& rng) {
    GenerationResult result;
    result.ranks = core::rank_population(pop);
    auto order = core::rank_order(result.ranks);
    auto draws = sample_offspring(pop, result.ranks, order, archive, mem, strategy, budget.spec(),
                                  rng);

    auto np = static_cast<std::size_t>(pop.size());
    result.delta_f.assign(np, 0.0);
    std::vector<core::SuccessRecord> successes;
    for (std::size_t i = 0; i < np; ++i) {
        if (budget.exhausted()) {
            result.partial = true;
            break;
        }
        core::Individual offspring;
        offspring.x = std::move(draws[i].u);
        offspring.f = budget.evaluate(offspring.x);
        ++result.evaluations;
        auto outcome = core::greedy_select(pop.members[i], std::move(offspring), archive, rng);
        result.delta_f[i] = outcome.delta_f;
        if (outcome.delta_f > 0.0) {
            successes.push_back({draws[i].params.f, draws[i].params.cr, outcome.delta_f});
        }
    }

    core::update_memory(mem, successes);
    core::shrink_to(pop, archive, core::lpsr_target_size(budget.used(), limits), rng);
    return result;
}

}  // namespace eade::engines
