#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eade/bench.hpp"
#include "eade/rng.hpp"

namespace eade::core {

struct Individual {
    std::vector<double> x;
    double f = 0.0;
};

struct Population {
    std::vector<Individual> members;

    int size() const { return static_cast<int>(members.size()); }
};

// Success-history memory for (F, CR) sampling. A CR slot becomes terminal
// (sentinel -1) once its successful crossover rates collapse to zero, and
// then emits CR = 0 forever.
struct ParamMemory {
    static constexpr double terminal_cr = -1.0;

    explicit ParamMemory(int slots = 6)
        : m_f(static_cast<std::size_t>(slots), 0.5),
          m_cr(static_cast<std::size_t>(slots), 0.5) {
        if (slots < 1) throw std::invalid_argument("ParamMemory needs at least one slot");
    }

    int slots() const { return static_cast<int>(m_f.size()); }

    std::vector<double> m_f;
    std::vector<double> m_cr;
    int write_index = 0;
};

// External archive of replaced parents. Bounded by the current population
// size; a full archive evicts a uniformly random entry.
struct Archive {
    std::vector<std::vector<double>> entries;
    int capacity = 0;

    int size() const { return static_cast<int>(entries.size()); }

    void push(std::vector<double> x, Rng& rng) {
        if (capacity <= 0) return;
        if (size() < capacity) {
            entries.push_back(std::move(x));
        } else {
            entries[static_cast<std::size_t>(rng.uniform_int(0, size() - 1))] = std::move(x);
        }
    }

    void evict_to_capacity(Rng& rng) {
        while (size() > capacity && !entries.empty()) {
            auto victim = static_cast<std::size_t>(rng.uniform_int(0, size() - 1));
            entries[victim] = std::move(entries.back());
            entries.pop_back();
        }
    }
};

struct DEParams {
    double f = 0.5;
    double cr = 0.5;
};

struct SuccessRecord {
    double f = 0.0;        // mutation scale that produced the improvement
    double cr = 0.0;
    double delta_f = 0.0;  // fitness gain, strictly positive
};

struct RunLimits {
    long long max_fes = 0;
    int np_init = 0;
    int np_min = 4;
};

// Counts objective evaluations against a fixed budget. Every evaluation in a
// run goes through one of these, so the budget cap is enforced at the single
// point where fitness values enter the system.
class EvalBudget {
public:
    EvalBudget(const bench::ObjectiveSpec& spec, long long max_fes)
        : spec_(&spec), max_fes_(max_fes) {
        if (max_fes < 0) throw std::invalid_argument("max_fes must be non-negative");
    }

    double evaluate(const std::vector<double>& x) {
        if (exhausted()) throw std::logic_error("evaluation past budget");
        ++used_;
        return bench::evaluate(*spec_, x);
    }

    bool exhausted() const { return used_ >= max_fes_; }
    long long used() const { return used_; }
    long long remaining() const { return max_fes_ - used_; }
    long long max_fes() const { return max_fes_; }
    const bench::ObjectiveSpec& spec() const { return *spec_; }

private:
    const bench::ObjectiveSpec* spec_;
    long long max_fes_ = 0;
    long long used_ = 0;
};

inline Population init_population(const bench::ObjectiveSpec& spec, int np_init, Rng& rng,
                                  EvalBudget& budget) {
    if (np_init < 1) throw std::invalid_argument("np_init must be >= 1");
    Population pop;
    pop.members.resize(static_cast<std::size_t>(np_init));
    auto d = static_cast<std::size_t>(spec.dimension);
    for (auto& ind : pop.members) {
        ind.x.resize(d);
        for (std::size_t j = 0; j < d; ++j) {
            ind.x[j] = rng.uniform(spec.lower[j], spec.upper[j]);
        }
        ind.f = budget.evaluate(ind.x);
    }
    return pop;
}

// 1-based fitness ranks, ties broken by member index.
inline std::vector<int> rank_population(const Population& pop) {
    auto n = static_cast<std::size_t>(pop.size());
    std::vector<int> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) {
        return pop.members[static_cast<std::size_t>(a)].f <
               pop.members[static_cast<std::size_t>(b)].f;
    });
    std::vector<int> ranks(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        ranks[static_cast<std::size_t>(idx[pos])] = static_cast<int>(pos) + 1;
    }
    return ranks;
}

// Member indices sorted best-first; inverse of rank_population.
inline std::vector<int> rank_order(const std::vector<int>& ranks) {
    std::vector<int> order(ranks.size());
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        order[static_cast<std::size_t>(ranks[i] - 1)] = static_cast<int>(i);
    }
    return order;
}

// Linear population size reduction target after `fes` evaluations.
inline int lpsr_target_size(long long fes, const RunLimits& limits) {
    if (limits.max_fes <= 0) throw std::invalid_argument("max_fes must be positive");
    double frac = static_cast<double>(fes) / static_cast<double>(limits.max_fes);
    auto target = static_cast<int>(
        std::llround(limits.np_init + (limits.np_min - limits.np_init) * frac));
    return std::clamp(target, limits.np_min, limits.np_init);
}

// Drops the worst-ranked members until the population reaches `target`, then
// tightens the archive capacity to the new size.
inline void shrink_to(Population& pop, Archive& archive, int target, Rng& rng) {
    if (target < 1) throw std::invalid_argument("target size must be >= 1");
    if (target < pop.size()) {
        auto ranks = rank_population(pop);
        std::vector<Individual> kept;
        kept.reserve(static_cast<std::size_t>(target));
        for (std::size_t i = 0; i < ranks.size(); ++i) {
            if (ranks[i] <= target) kept.push_back(std::move(pop.members[i]));
        }
        pop.members = std::move(kept);
    }
    archive.capacity = pop.size();
    archive.evict_to_capacity(rng);
}

inline DEParams sample_parameters(const ParamMemory& mem, Rng& rng) {
    auto slot = static_cast<std::size_t>(rng.uniform_int(0, mem.slots() - 1));
    DEParams p;
    do {
        p.f = rng.cauchy(mem.m_f[slot], 0.1);
    } while (p.f <= 0.0);
    if (p.f > 1.0) p.f = 1.0;
    if (mem.m_cr[slot] == ParamMemory::terminal_cr) {
        p.cr = 0.0;
    } else {
        p.cr = std::clamp(rng.normal(mem.m_cr[slot], 0.1), 0.0, 1.0);
    }
    return p;
}

namespace detail {

// Weighted Lehmer mean: sum(w v^2) / sum(w v).
inline double lehmer_mean(const std::vector<SuccessRecord>& successes,
                          double total_gain, double SuccessRecord::* field) {
    double num = 0.0;
    double den = 0.0;
    for (const auto& s : successes) {
        double w = s.delta_f / total_gain;
        double v = s.*field;
        num += w * v * v;
        den += w * v;
    }
    return num / den;
}

}  // namespace detail

// Success-history update. One slot is rewritten per generation with improving
// offspring; no successes leave the memory untouched.
inline void update_memory(ParamMemory& mem, const std::vector<SuccessRecord>& successes) {
    if (successes.empty()) return;
    double total_gain = 0.0;
    double max_cr = 0.0;
    for (const auto& s : successes) {
        if (s.delta_f <= 0.0) throw std::invalid_argument("success with non-positive gain");
        total_gain += s.delta_f;
        max_cr = std::max(max_cr, s.cr);
    }

    auto slot = static_cast<std::size_t>(mem.write_index);
    mem.m_f[slot] = detail::lehmer_mean(successes, total_gain, &SuccessRecord::f);
    if (mem.m_cr[slot] == ParamMemory::terminal_cr || max_cr <= 0.0) {
        mem.m_cr[slot] = ParamMemory::terminal_cr;
    } else {
        mem.m_cr[slot] = detail::lehmer_mean(successes, total_gain, &SuccessRecord::cr);
    }
    mem.write_index = (mem.write_index + 1) % mem.slots();
}

// Midpoint repair: an out-of-bounds component moves to the midpoint between
// the violated bound and the parent's component.
inline std::vector<double> repair_bounds(std::vector<double> v, const std::vector<double>& parent,
                                         const bench::ObjectiveSpec& spec) {
    for (std::size_t j = 0; j < v.size(); ++j) {
        if (v[j] < spec.lower[j]) {
            v[j] = 0.5 * (spec.lower[j] + parent[j]);
        } else if (v[j] > spec.upper[j]) {
            v[j] = 0.5 * (spec.upper[j] + parent[j]);
        }
    }
    return v;
}

struct SelectionOutcome {
    bool replaced = false;
    double delta_f = 0.0;
};

// Greedy survivor selection for one slot. The offspring replaces the parent
// only on a strict improvement, which also sends the parent to the archive
// and reports the positive fitness gain; ties keep the parent.
inline SelectionOutcome greedy_select(Individual& slot, Individual offspring, Archive& archive,
                                      Rng& rng) {
    SelectionOutcome out;
    if (offspring.f < slot.f) {
        out.replaced = true;
        out.delta_f = slot.f - offspring.f;
        archive.push(std::move(slot.x), rng);
        slot = std::move(offspring);
    }
    return out;
}

}  // namespace eade::core
