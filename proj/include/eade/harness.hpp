#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eade/bench.hpp"
#include "eade/core.hpp"
#include "eade/engines.hpp"
#include "eade/rng.hpp"
#include "eade/scheduler.hpp"

namespace eade::harness {

struct RunConfig {
    bench::ObjectiveSpec spec;
    sched::Algo algo = sched::Algo::Eade;
    long long max_fes = 0;       // 0: defaults to 10000 * dimension
    int np_init = 0;             // 0: defaults to 18 * dimension
    int np_min = 4;
    sched::SchedulerConfig schedule;
    std::uint64_t seed = 1;
    long long history_stride = 0;  // 0: defaults to max_fes / 200
};

inline RunConfig with_defaults(RunConfig cfg) {
    int d = cfg.spec.dimension;
    if (d < 1) throw std::invalid_argument("objective dimension must be >= 1");
    if (cfg.spec.lower.size() != static_cast<std::size_t>(d) ||
        cfg.spec.upper.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("bound vectors must match the dimension");
    }
    for (int j = 0; j < d; ++j) {
        if (!(cfg.spec.lower[static_cast<std::size_t>(j)] <
              cfg.spec.upper[static_cast<std::size_t>(j)])) {
            throw std::invalid_argument("lower bound must be below upper bound");
        }
    }
    if (!cfg.spec.shift.empty() && cfg.spec.shift.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("shift vector must match the dimension");
    }
    if (!cfg.spec.rotation.empty() &&
        cfg.spec.rotation.size() != static_cast<std::size_t>(d) * static_cast<std::size_t>(d)) {
        throw std::invalid_argument("rotation matrix must match the dimension");
    }

    if (cfg.max_fes == 0) cfg.max_fes = 10000LL * d;
    if (cfg.np_init == 0) cfg.np_init = 18 * d;
    if (cfg.history_stride == 0) cfg.history_stride = std::max<long long>(1, cfg.max_fes / 200);

    if (cfg.max_fes < 1) throw std::invalid_argument("max_fes must be positive");
    if (cfg.np_min < 4) throw std::invalid_argument("np_min must be >= 4");
    if (cfg.np_init < cfg.np_min) throw std::invalid_argument("np_init must be >= np_min");
    if (cfg.max_fes < cfg.np_init) {
        throw std::invalid_argument("max_fes cannot cover population initialization");
    }
    if (cfg.schedule.len < 1 || cfg.schedule.k < 1 || cfg.schedule.q < 1) {
        throw std::invalid_argument("scheduler config values must be >= 1");
    }
    if (cfg.history_stride < 1) throw std::invalid_argument("history_stride must be positive");
    return cfg;
}

struct HistoryPoint {
    long long fes = 0;
    double best = 0.0;  // best error so far, before report clamping
};

struct RunResult {
    double best_f = 0.0;  // final best error, report-clamped
    std::vector<HistoryPoint> history;
    std::vector<engines::StrategyLabel> usage_trace;
    double trigger_fraction = 1.0;  // budget fraction spent when the trigger latched, 1 if never
    bool triggered = false;
    long long fes_used = 0;
    double wall_time_seconds = 0.0;  // informational only, excluded from serialization
};

// Per-generation snapshot handed to an observer. Reference members point at
// the current generation's buffers and are only valid during the callback.
struct GenerationObservation {
    long long generation = 0;  // 1-based
    engines::StrategyLabel label = engines::StrategyLabel::S1;
    const std::vector<int>& ranks;        // ranks at generation start
    const std::vector<double>& delta_f;   // per-member gains of this generation
    int evaluations = 0;
    bool partial = false;
    int np_after = 0;
    long long fes = 0;
};

using Observer = std::function<void(const GenerationObservation&)>;

// Runs one trial to budget exhaustion. Fully deterministic in the config:
// the observer sees every generation but cannot perturb the trajectory.
inline RunResult run_trial(const RunConfig& raw, const Observer& observer = {}) {
    RunConfig cfg = with_defaults(raw);
    auto t0 = std::chrono::steady_clock::now();

    Rng rng_init = Rng::substream(cfg.seed, "init");
    Rng rng_engine = Rng::substream(cfg.seed, "engine");
    Rng rng_sched = Rng::substream(cfg.seed, "scheduler");

    core::RunLimits limits{cfg.max_fes, cfg.np_init, cfg.np_min};
    core::EvalBudget budget(cfg.spec, cfg.max_fes);
    core::Population pop = core::init_population(cfg.spec, cfg.np_init, rng_init, budget);
    core::Archive archive;
    archive.capacity = pop.size();
    core::ParamMemory shade_memory;
    core::ParamMemory cip_memory;
    sched::StrategyScheduler scheduler(cfg.algo, cfg.schedule);

    double offset = bench::known_optimum(cfg.spec.id).value_or(0.0);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& ind : pop.members) best = std::min(best, ind.f);
    best -= offset;

    RunResult result;
    result.history.push_back({budget.used(), best});
    long long next_mark = (budget.used() / cfg.history_stride + 1) * cfg.history_stride;
    long long trigger_fes = -1;

    sched::GenerationFeedback feedback;
    bool have_feedback = false;
    long long generation = 0;
    while (!budget.exhausted()) {
        long long fes_before = budget.used();
        auto label = scheduler.plan_next_generation(have_feedback ? &feedback : nullptr,
                                                    rng_sched);
        if (trigger_fes < 0 && scheduler.triggered()) trigger_fes = fes_before;

        auto strategy = engines::strategy_for(label);
        auto& memory = strategy.engine == engines::EngineKind::Cip ? cip_memory : shade_memory;
        auto gen = engines::generation_step(pop, archive, memory, strategy, budget, limits,
                                            rng_engine);
        ++generation;

        for (const auto& ind : pop.members) best = std::min(best, ind.f - offset);
        if (budget.used() >= next_mark) {
            result.history.push_back({budget.used(), best});
            next_mark = (budget.used() / cfg.history_stride + 1) * cfg.history_stride;
        }
        if (observer) {
            observer(GenerationObservation{generation, label, gen.ranks, gen.delta_f,
                                           gen.evaluations, gen.partial, pop.size(),
                                           budget.used()});
        }
        feedback.ranks = std::move(gen.ranks);
        feedback.delta_f = std::move(gen.delta_f);
        have_feedback = true;
    }

    if (result.history.back().fes != budget.used()) {
        result.history.push_back({budget.used(), best});
    }
    result.best_f = bench::report_clamp(best);
    result.usage_trace = scheduler.usage_trace();
    result.triggered = trigger_fes >= 0;
    result.trigger_fraction =
        result.triggered
            ? static_cast<double>(trigger_fes) / static_cast<double>(cfg.max_fes)
            : 1.0;
    result.fes_used = budget.used();
    result.wall_time_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

namespace detail {

template <class PointAt>
double diversity_impl(std::size_t n, std::size_t dim, PointAt at) {
    if (n == 0) throw std::invalid_argument("diversity of empty set");
    std::vector<double> centroid(dim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double>& p = at(i);
        for (std::size_t j = 0; j < dim; ++j) centroid[j] += p[j];
    }
    for (auto& c : centroid) c /= static_cast<double>(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::vector<double>& p = at(i);
        double sq = 0.0;
        for (std::size_t j = 0; j < dim; ++j) {
            double d = p[j] - centroid[j];
            sq += d * d;
        }
        acc += std::sqrt(sq);
    }
    return acc / static_cast<double>(n);
}

}  // namespace detail

// Population diversity: mean Euclidean distance to the centroid.
inline double diversity(const std::vector<std::vector<double>>& points) {
    return detail::diversity_impl(points.size(), points.empty() ? 0 : points.front().size(),
                                  [&](std::size_t i) -> const std::vector<double>& {
                                      return points[i];
                                  });
}

inline double diversity(const core::Population& pop) {
    return detail::diversity_impl(static_cast<std::size_t>(pop.size()),
                                  pop.members.empty() ? 0 : pop.members.front().x.size(),
                                  [&](std::size_t i) -> const std::vector<double>& {
                                      return pop.members[i].x;
                                  });
}

struct ProbeResult {
    long long generations = 0;
    // Generation counts from pairwise diversity comparisons of the candidate
    // offspring populations (ties excluded).
    long long s1_below_s2 = 0;
    long long s1_above_s2 = 0;
    long long s3_below_s1 = 0;
    long long s3_above_s1 = 0;
    double r1 = 1.0;  // explorative vs balanced: s1_below_s2 / s1_above_s2
    double r2 = 1.0;  // exploitative vs balanced: s3_below_s1 / s3_above_s1
};

namespace detail {

inline double count_ratio(long long num, long long den) {
    if (den == 0) {
        return num == 0 ? 1.0 : std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace detail

// Runs a balanced-strategy baseline and, each generation, samples the full
// offspring population every strategy would have proposed from the same
// state. Instrumentation draws come from a separate stream, so the baseline
// trajectory matches an uninstrumented balanced run with the same seed.
inline ProbeResult probe_diversity(const RunConfig& raw) {
    RunConfig cfg = with_defaults(raw);

    Rng rng_init = Rng::substream(cfg.seed, "init");
    Rng rng_engine = Rng::substream(cfg.seed, "engine");
    Rng rng_probe = Rng::substream(cfg.seed, "probe");

    core::RunLimits limits{cfg.max_fes, cfg.np_init, cfg.np_min};
    core::EvalBudget budget(cfg.spec, cfg.max_fes);
    core::Population pop = core::init_population(cfg.spec, cfg.np_init, rng_init, budget);
    core::Archive archive;
    archive.capacity = pop.size();
    core::ParamMemory shade_memory;
    core::ParamMemory cip_memory;

    ProbeResult probe;
    auto baseline = engines::strategy_for(engines::StrategyLabel::S1);
    while (!budget.exhausted()) {
        auto ranks = core::rank_population(pop);
        auto order = core::rank_order(ranks);

        double div[3];
        for (int s = 0; s < 3; ++s) {
            auto label = static_cast<engines::StrategyLabel>(s);
            auto strategy = engines::strategy_for(label);
            const auto& memory =
                strategy.engine == engines::EngineKind::Cip ? cip_memory : shade_memory;
            auto draws = engines::sample_offspring(pop, ranks, order, archive, memory, strategy,
                                                   cfg.spec, rng_probe);
            div[s] = detail::diversity_impl(draws.size(), draws.front().u.size(),
                                            [&](std::size_t i) -> const std::vector<double>& {
                                                return draws[i].u;
                                            });
        }
        if (div[0] < div[1]) ++probe.s1_below_s2;
        if (div[0] > div[1]) ++probe.s1_above_s2;
        if (div[2] < div[0]) ++probe.s3_below_s1;
        if (div[2] > div[0]) ++probe.s3_above_s1;

        engines::generation_step(pop, archive, shade_memory, baseline, budget, limits,
                                 rng_engine);
        ++probe.generations;
    }

    probe.r1 = detail::count_ratio(probe.s1_below_s2, probe.s1_above_s2);
    probe.r2 = detail::count_ratio(probe.s3_below_s1, probe.s3_above_s1);
    return probe;
}

}  // namespace eade::harness
