#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eade/engines.hpp"
#include "eade/rng.hpp"

namespace eade::sched {

enum class Algo {
    Eade,     // detection mechanism + adaptive strategy choice
    FixedS1,  // balanced strategy for the whole run
    FixedS2,  // explorative strategy for the whole run
    FixedS3,  // exploitative strategy for the whole run
    Oppo,     // adaptive choice inverted (ablation)
    Random,   // adaptive choice drawn uniformly (ablation)
    Tae       // trial-and-error credit assignment (ablation)
};

inline const char* algo_name(Algo algo) {
    switch (algo) {
        case Algo::Eade: return "eade";
        case Algo::FixedS1: return "s1";
        case Algo::FixedS2: return "s2";
        case Algo::FixedS3: return "s3";
        case Algo::Oppo: return "oppo";
        case Algo::Random: return "random";
        case Algo::Tae: return "tae";
    }
    throw std::invalid_argument("unknown algo");
}

inline Algo algo_from_name(const std::string& name) {
    if (name == "eade") return Algo::Eade;
    if (name == "s1") return Algo::FixedS1;
    if (name == "s2") return Algo::FixedS2;
    if (name == "s3") return Algo::FixedS3;
    if (name == "oppo") return Algo::Oppo;
    if (name == "random") return Algo::Random;
    if (name == "tae") return Algo::Tae;
    throw std::invalid_argument("unknown algo name: " + name);
}

struct SchedulerConfig {
    int len = 30;  // measurement-phase length in generations
    int k = 2;     // adaptive phase lasts k * len generations
    int q = 10;    // detection window length in generations
};

// Splits a generation's fitness gains by the contributing member's rank:
// the superior half is rank <= floor(NP/2), the inferior half is the rest.
// Both sums accumulate in member-index order.
inline std::pair<double, double> split_improvements(const std::vector<int>& ranks,
                                                    const std::vector<double>& delta_f) {
    if (ranks.size() != delta_f.size()) {
        throw std::invalid_argument("ranks and delta_f must align");
    }
    int cutoff = static_cast<int>(ranks.size()) / 2;
    double sup = 0.0;
    double inf = 0.0;
    for (std::size_t i = 0; i < ranks.size(); ++i) {
        if (ranks[i] <= cutoff) {
            sup += delta_f[i];
        } else {
            inf += delta_f[i];
        }
    }
    return {sup, inf};
}

struct DetectionWindow {
    double sup_gain = 0.0;
    double inf_gain = 0.0;
    int generations = 0;
};

struct SchedulerState {
    bool triggered = false;
    DetectionWindow window;
    // Accumulators for the current measurement phase.
    double phase_sup = 0.0;
    double phase_inf = 0.0;
    std::array<double, 3> credits{};  // per-strategy gains, trial-and-error only
};

// Detection step, applied once per pre-trigger generation. When a full
// window shows the superior half out-gaining the inferior half, the trigger
// latches for the rest of the run; otherwise the window starts over.
inline void dm_step(SchedulerState& state, double sup, double inf, int q) {
    if (state.triggered) return;
    state.window.sup_gain += sup;
    state.window.inf_gain += inf;
    ++state.window.generations;
    if (state.window.generations < q) return;
    if (state.window.sup_gain > state.window.inf_gain) {
        state.triggered = true;
    }
    state.window = DetectionWindow{};
}

// Adaptive choice: gains concentrated in the superior half reward
// exploitation (S3), gains from the inferior half reward exploration (S2).
inline engines::StrategyLabel ea_decide(double sup, double inf, Rng& rng) {
    if (sup > inf) return engines::StrategyLabel::S3;
    if (sup < inf) return engines::StrategyLabel::S2;
    return rng.bernoulli(0.5) ? engines::StrategyLabel::S2 : engines::StrategyLabel::S3;
}

inline engines::StrategyLabel oppo_decide(double sup, double inf, Rng& rng) {
    if (sup > inf) return engines::StrategyLabel::S2;
    if (sup < inf) return engines::StrategyLabel::S3;
    return rng.bernoulli(0.5) ? engines::StrategyLabel::S2 : engines::StrategyLabel::S3;
}

inline engines::StrategyLabel random_decide(Rng& rng) {
    return rng.bernoulli(0.5) ? engines::StrategyLabel::S2 : engines::StrategyLabel::S3;
}

// Largest accumulated credit wins; ties resolve uniformly among the tied.
inline engines::StrategyLabel tae_decide(const std::array<double, 3>& credits, Rng& rng) {
    double best = credits[0];
    for (double c : credits) best = std::max(best, c);
    std::array<int, 3> tied{};
    int n_tied = 0;
    for (int s = 0; s < 3; ++s) {
        if (credits[static_cast<std::size_t>(s)] == best) tied[static_cast<std::size_t>(n_tied++)] = s;
    }
    int pick = tied[static_cast<std::size_t>(rng.uniform_int(0, n_tied - 1))];
    return static_cast<engines::StrategyLabel>(pick);
}

struct GenerationFeedback {
    std::vector<int> ranks;
    std::vector<double> delta_f;
};

// Decides which strategy runs each generation. Fixed algos always answer the
// same label. The adaptive algos run the balanced strategy until the
// detection trigger latches, then cycle measurement phases (len generations)
// and adaptive phases (k * len generations of the strategy the measurement
// chose). Ablation variants differ only in how the choice is made.
class StrategyScheduler {
public:
    StrategyScheduler(Algo algo, SchedulerConfig config) : algo_(algo), config_(config) {
        if (config.len < 1 || config.k < 1 || config.q < 1) {
            throw std::invalid_argument("scheduler config values must be >= 1");
        }
    }

    // Call once per generation. `feedback` describes the generation that just
    // ran (null before the first one); the return value is the strategy for
    // the next generation. Labels are also appended to the usage trace.
    engines::StrategyLabel plan_next_generation(const GenerationFeedback* feedback, Rng& rng) {
        if (feedback) consume(*feedback, rng);
        engines::StrategyLabel label = emit(rng);
        trace_.push_back(label);
        last_label_ = label;
        return label;
    }

    bool triggered() const { return state_.triggered; }
    const SchedulerState& state() const { return state_; }
    const std::vector<engines::StrategyLabel>& usage_trace() const { return trace_; }

private:
    enum class Mode { PreTrigger, Measure, Adaptive };

    bool fixed() const {
        return algo_ == Algo::FixedS1 || algo_ == Algo::FixedS2 || algo_ == Algo::FixedS3;
    }

    void consume(const GenerationFeedback& feedback, Rng& rng) {
        if (fixed()) return;
        auto [sup, inf] = split_improvements(feedback.ranks, feedback.delta_f);
        switch (mode_) {
            case Mode::PreTrigger:
                dm_step(state_, sup, inf, config_.q);
                if (state_.triggered) enter_measure();
                break;
            case Mode::Measure:
                state_.phase_sup += sup;
                state_.phase_inf += inf;
                if (algo_ == Algo::Tae) {
                    state_.credits[static_cast<std::size_t>(last_label_)] += sup + inf;
                }
                if (++completed_in_mode_ == config_.len) {
                    chosen_ = decide(rng);
                    mode_ = Mode::Adaptive;
                    completed_in_mode_ = 0;
                }
                break;
            case Mode::Adaptive:
                if (++completed_in_mode_ == config_.k * config_.len) enter_measure();
                break;
        }
    }

    engines::StrategyLabel decide(Rng& rng) {
        switch (algo_) {
            case Algo::Eade: return ea_decide(state_.phase_sup, state_.phase_inf, rng);
            case Algo::Oppo: return oppo_decide(state_.phase_sup, state_.phase_inf, rng);
            case Algo::Random: return random_decide(rng);
            case Algo::Tae: return tae_decide(state_.credits, rng);
            default: throw std::logic_error("fixed algo has no adaptive decision");
        }
    }

    void enter_measure() {
        mode_ = Mode::Measure;
        completed_in_mode_ = 0;
        state_.phase_sup = 0.0;
        state_.phase_inf = 0.0;
        state_.credits = {};
    }

    engines::StrategyLabel emit(Rng& rng) {
        switch (algo_) {
            case Algo::FixedS1: return engines::StrategyLabel::S1;
            case Algo::FixedS2: return engines::StrategyLabel::S2;
            case Algo::FixedS3: return engines::StrategyLabel::S3;
            default: break;
        }
        switch (mode_) {
            case Mode::PreTrigger: return engines::StrategyLabel::S1;
            case Mode::Measure:
                if (algo_ == Algo::Tae) {
                    return static_cast<engines::StrategyLabel>(rng.uniform_int(0, 2));
                }
                return engines::StrategyLabel::S1;
            case Mode::Adaptive: return chosen_;
        }
        throw std::logic_error("unreachable");
    }

    Algo algo_;
    SchedulerConfig config_;
    SchedulerState state_;
    Mode mode_ = Mode::PreTrigger;
    int completed_in_mode_ = 0;
    engines::StrategyLabel chosen_ = engines::StrategyLabel::S1;
    engines::StrategyLabel last_label_ = engines::StrategyLabel::S1;
    std::vector<engines::StrategyLabel> trace_;
};

}  // namespace eade::sched
