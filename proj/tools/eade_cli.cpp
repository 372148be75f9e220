// Command-line front end: single trials, manifest-driven experiments, the
// offspring-diversity probe, and (len, k) schedule sweeps.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <eade/eade.hpp>

namespace {

using eade::harness::RunConfig;

void write_text(const std::string& out, const std::string& text) {
    if (out == "-") {
        std::cout << text;
        return;
    }
    std::ofstream file(out);
    if (!file) throw std::invalid_argument("cannot open output file: " + out);
    file << text;
}

struct TrialArgs {
    std::string function;
    int dim = 0;
    std::string algo = "eade";
    std::uint64_t seed = 1;
    long long max_fes = 0;
    int np_init = 0;
    int np_min = 4;
    int len = 30;
    int k = 2;
    int q = 10;
    long long history_stride = 0;
    std::string transform;
    std::string out = "-";
};

void add_problem_options(CLI::App& cmd, TrialArgs& args) {
    cmd.add_option("--function", args.function, "Objective: sphere, powers, schwefel, rastrigin")
        ->required();
    cmd.add_option("--dim", args.dim, "Problem dimension")->required();
    cmd.add_option("--max-fes", args.max_fes, "Evaluation budget (default 10000 * dim)");
    cmd.add_option("--transform", args.transform, "Shift/rotation file applied to the objective");
}

void add_search_options(CLI::App& cmd, TrialArgs& args) {
    cmd.add_option("--algo", args.algo, "eade, s1, s2, s3, oppo, random, tae");
    cmd.add_option("--np-init", args.np_init, "Initial population size (default 18 * dim)");
    cmd.add_option("--np-min", args.np_min, "Final population size");
    cmd.add_option("--len", args.len, "Measurement phase length in generations");
    cmd.add_option("--k", args.k, "Adaptive phase length multiplier");
    cmd.add_option("--q", args.q, "Detection window length in generations");
    cmd.add_option("--history-stride", args.history_stride,
                   "Evaluations between history samples (default max_fes / 200)");
}

RunConfig build_config(const TrialArgs& args) {
    RunConfig cfg;
    cfg.spec = eade::bench::make_spec(eade::bench::function_from_name(args.function), args.dim);
    if (!args.transform.empty()) eade::bench::load_transform(cfg.spec, args.transform);
    cfg.algo = eade::sched::algo_from_name(args.algo);
    cfg.seed = args.seed;
    cfg.max_fes = args.max_fes;
    cfg.np_init = args.np_init;
    cfg.np_min = args.np_min;
    cfg.schedule = {args.len, args.k, args.q};
    cfg.history_stride = args.history_stride;
    return cfg;
}

int cmd_run(const TrialArgs& args) {
    RunConfig cfg = build_config(args);
    auto result = eade::harness::run_trial(cfg);
    auto doc = eade::harness::result_document(cfg, result);
    write_text(args.out, doc.dump(2) + "\n");
    return 0;
}

int cmd_probe(const TrialArgs& args) {
    RunConfig cfg = build_config(args);
    auto probe = eade::harness::probe_diversity(cfg);
    cfg = eade::harness::with_defaults(cfg);

    nlohmann::ordered_json doc;
    doc["function"] = args.function;
    doc["dim"] = args.dim;
    doc["seed"] = args.seed;
    doc["max_fes"] = cfg.max_fes;
    doc["generations"] = probe.generations;
    doc["s1_below_s2"] = probe.s1_below_s2;
    doc["s1_above_s2"] = probe.s1_above_s2;
    doc["s3_below_s1"] = probe.s3_below_s1;
    doc["s3_above_s1"] = probe.s3_above_s1;
    auto ratio = [](double r) -> nlohmann::ordered_json {
        if (std::isinf(r)) return "inf";
        return r;
    };
    doc["r1"] = ratio(probe.r1);
    doc["r2"] = ratio(probe.r2);
    write_text(args.out, doc.dump(2) + "\n");
    return 0;
}

int cmd_experiment(const std::string& manifest_path, const std::string& out_dir, int jobs) {
    auto manifest = eade::harness::parse_manifest(manifest_path);
    auto outcome = eade::harness::run_experiment(manifest, out_dir, jobs);
    for (std::size_t c = 0; c < outcome.cells.size(); ++c) {
        const auto& cell = outcome.cells[c];
        if (!cell.ok()) {
            std::cerr << "cell " << c << " (" << cell.cell.function << " " << cell.cell.dim << " "
                      << cell.cell.algo << ") failed: " << cell.errors.front() << "\n";
        }
    }
    return outcome.cells_failed > 0 ? 2 : 0;
}

int cmd_sweep(const TrialArgs& args, const std::vector<int>& len_list,
              const std::vector<int>& k_list, int trials, std::uint64_t seed_base, int jobs) {
    if (trials < 1) throw std::invalid_argument("trials must be >= 1");
    if (len_list.empty() || k_list.empty()) {
        throw std::invalid_argument("len and k lists must be non-empty");
    }

    struct Cell {
        int len;
        int k;
        std::vector<double> best_f;
    };
    std::vector<Cell> cells;
    for (int len : len_list) {
        for (int k : k_list) cells.push_back({len, k, {}});
    }
    for (auto& cell : cells) cell.best_f.assign(static_cast<std::size_t>(trials), 0.0);

    std::vector<std::string> errors(cells.size() * static_cast<std::size_t>(trials));
    eade::harness::detail::parallel_tasks(
        static_cast<long long>(cells.size()) * trials, jobs, [&](long long task) {
            auto cell_index = static_cast<std::size_t>(task / trials);
            int trial = static_cast<int>(task % trials);
            try {
                TrialArgs cell_args = args;
                cell_args.len = cells[cell_index].len;
                cell_args.k = cells[cell_index].k;
                cell_args.seed = seed_base + static_cast<std::uint64_t>(trial);
                RunConfig cfg = build_config(cell_args);
                cells[cell_index].best_f[static_cast<std::size_t>(trial)] =
                    eade::harness::run_trial(cfg).best_f;
            } catch (const std::exception& e) {
                errors[static_cast<std::size_t>(task)] = e.what();
            }
        });
    for (const auto& error : errors) {
        if (!error.empty()) throw std::invalid_argument("sweep cell failed: " + error);
    }

    std::ostringstream csv;
    csv << "function,dim,algo,len,k,trials,mean,std,median\n";
    for (const auto& cell : cells) {
        csv << args.function << ',' << args.dim << ',' << args.algo << ',' << cell.len << ','
            << cell.k << ',' << trials << ',' << eade::harness::detail::sci(eade::stats::mean(cell.best_f))
            << ',' << eade::harness::detail::sci(eade::stats::sample_stddev(cell.best_f)) << ','
            << eade::harness::detail::sci(eade::stats::median(cell.best_f)) << '\n';
    }
    write_text(args.out, csv.str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"EaDE: adaptive differential evolution with explicit "
                 "exploitation and exploration strategies"};
    app.require_subcommand(1);

    TrialArgs run_args;
    auto* run = app.add_subcommand("run", "Run one trial, write its result document");
    add_problem_options(*run, run_args);
    add_search_options(*run, run_args);
    run->add_option("--seed", run_args.seed, "Master seed");
    run->add_option("--out", run_args.out, "Output file, - for stdout");

    std::string manifest_path, out_dir;
    int jobs = 0;
    auto* experiment = app.add_subcommand("experiment", "Run a manifest of experiment cells");
    experiment->add_option("--manifest", manifest_path, "Manifest file")->required();
    experiment->add_option("--out-dir", out_dir, "Output directory")->required();
    experiment->add_option("--jobs", jobs, "Worker threads, 0 for all cores");

    TrialArgs probe_args;
    auto* probe = app.add_subcommand("probe-diversity",
                                     "Compare candidate offspring diversity across strategies");
    add_problem_options(*probe, probe_args);
    probe->add_option("--seed", probe_args.seed, "Master seed");
    probe->add_option("--out", probe_args.out, "Output file, - for stdout");

    TrialArgs sweep_args;
    std::vector<int> len_list{10, 30, 50, 70, 90};
    std::vector<int> k_list{1, 2, 3, 4, 5};
    int sweep_trials = 5;
    std::uint64_t sweep_seed_base = 1;
    int sweep_jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "Grid over schedule lengths (len, k)");
    add_problem_options(*sweep, sweep_args);
    sweep->add_option("--algo", sweep_args.algo, "eade, s1, s2, s3, oppo, random, tae");
    sweep->add_option("--len-list", len_list, "Comma-separated len values")->delimiter(',');
    sweep->add_option("--k-list", k_list, "Comma-separated k values")->delimiter(',');
    sweep->add_option("--trials", sweep_trials, "Trials per grid cell");
    sweep->add_option("--seed-base", sweep_seed_base, "Seed for trial 0; trial t uses base + t");
    sweep->add_option("--jobs", sweep_jobs, "Worker threads, 0 for all cores");
    sweep->add_option("--out", sweep_args.out, "Output file, - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        if (run->parsed()) return cmd_run(run_args);
        if (experiment->parsed()) return cmd_experiment(manifest_path, out_dir, jobs);
        if (probe->parsed()) return cmd_probe(probe_args);
        if (sweep->parsed()) {
            return cmd_sweep(sweep_args, len_list, k_list, sweep_trials, sweep_seed_base,
                             sweep_jobs);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
