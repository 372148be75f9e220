// Minimal library usage: optimize the 10-D rastrigin function with the
// adaptive scheduler and print the convergence history.

#include <cstdio>

#include <eade/eade.hpp>

int main() {
    eade::harness::RunConfig cfg;
    cfg.spec = eade::bench::make_spec(eade::bench::FunctionId::Rastrigin, 10);
    cfg.algo = eade::sched::Algo::Eade;
    cfg.seed = 42;
    cfg.max_fes = 100000;

    auto result = eade::harness::run_trial(cfg);
    std::printf("best error: %.6e after %lld evaluations\n", result.best_f, result.fes_used);
    if (result.triggered) {
        std::printf("adaptation kicked in after %.1f%% of the budget\n",
                    100.0 * result.trigger_fraction);
    } else {
        std::printf("adaptation never triggered\n");
    }
    std::printf("convergence:\n");
    for (std::size_t i = 0; i < result.history.size(); i += result.history.size() / 10 + 1) {
        const auto& point = result.history[i];
        std::printf("  fes %7lld  best %.6e\n", point.fes, point.best);
    }
    return 0;
}
