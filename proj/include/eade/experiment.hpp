#pragma once

#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <json.hpp>

#include "eade/harness.hpp"
#include "eade/stats.hpp"

namespace eade::harness {

// One experiment cell: a (function, dimension, algorithm) combination, plus
// optional per-cell config overrides. Every cell runs the same trial count
// with the same seed sequence, so cells are paired trial-by-trial.
struct ManifestCell {
    std::string function;
    int dim = 0;
    std::string algo;
    std::map<std::string, std::string> overrides;
};

struct Manifest {
    std::uint64_t seed_base = 1;
    int trials = 1;
    std::map<std::string, std::string> defaults;
    std::vector<ManifestCell> cells;
};

namespace detail {

inline bool known_config_key(const std::string& key) {
    static const std::set<std::string> keys{"max_fes", "np_init", "np_min",
                                           "len",     "k",       "q",
                                           "history_stride"};
    return keys.count(key) > 0;
}

inline long long parse_count(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        auto n = static_cast<long long>(std::llround(v));
        if (static_cast<double>(n) != v) throw std::invalid_argument(value);
        return n;
    } catch (const std::exception&) {
        throw std::invalid_argument("manifest: bad integer for " + key + ": " + value);
    }
}

inline void apply_config_key(RunConfig& cfg, const std::string& key, const std::string& value) {
    long long v = parse_count(key, value);
    if (key == "max_fes") {
        cfg.max_fes = v;
    } else if (key == "np_init") {
        cfg.np_init = static_cast<int>(v);
    } else if (key == "np_min") {
        cfg.np_min = static_cast<int>(v);
    } else if (key == "len") {
        cfg.schedule.len = static_cast<int>(v);
    } else if (key == "k") {
        cfg.schedule.k = static_cast<int>(v);
    } else if (key == "q") {
        cfg.schedule.q = static_cast<int>(v);
    } else if (key == "history_stride") {
        cfg.history_stride = v;
    } else {
        throw std::invalid_argument("manifest: unknown config key: " + key);
    }
}

}  // namespace detail

// Manifest syntax, one directive per line:
//   # comment
//   seed_base = 1000
//   trials = 10
//   max_fes = 3e5                 (any config key, applied to every cell)
//   cell sphere 30 eade
//   cell rastrigin 10 oppo len=10 k=1
inline Manifest parse_manifest(std::istream& in) {
    Manifest m;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream row(line);
        std::string head;
        if (!(row >> head)) continue;

        auto fail = [&](const std::string& what) {
            throw std::invalid_argument("manifest line " + std::to_string(line_no) + ": " + what);
        };

        if (head == "cell") {
            ManifestCell cell;
            if (!(row >> cell.function >> cell.dim >> cell.algo)) {
                fail("expected: cell <function> <dim> <algo> [key=value ...]");
            }
            try {
                bench::function_from_name(cell.function);
                sched::algo_from_name(cell.algo);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            if (cell.dim < 1) fail("dimension must be >= 1");
            std::string kv;
            while (row >> kv) {
                auto eq = kv.find('=');
                if (eq == std::string::npos || eq == 0 || eq + 1 >= kv.size()) {
                    fail("expected key=value, got: " + kv);
                }
                std::string key = kv.substr(0, eq);
                if (!detail::known_config_key(key)) fail("unknown config key: " + key);
                std::string value = kv.substr(eq + 1);
                try {
                    detail::parse_count(key, value);
                } catch (const std::invalid_argument& e) {
                    fail(e.what());
                }
                cell.overrides[key] = value;
            }
            m.cells.push_back(std::move(cell));
            continue;
        }

        std::string eq, value;
        if (!(row >> eq >> value) || eq != "=") fail("expected: <key> = <value>");
        std::string extra;
        if (row >> extra) fail("trailing tokens after value");
        if (head == "seed_base" || head == "trials") {
            long long n = 0;
            try {
                n = detail::parse_count(head, value);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            if (head == "seed_base") {
                m.seed_base = static_cast<std::uint64_t>(n);
            } else {
                m.trials = static_cast<int>(n);
            }
        } else if (detail::known_config_key(head)) {
            try {
                detail::parse_count(head, value);
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
            m.defaults[head] = value;
        } else {
            fail("unknown key: " + head);
        }
    }
    if (m.trials < 1) throw std::invalid_argument("manifest: trials must be >= 1");
    if (m.cells.empty()) throw std::invalid_argument("manifest: no cells");
    return m;
}

inline Manifest parse_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("manifest: cannot open " + path);
    return parse_manifest(in);
}

inline RunConfig config_for_cell(const Manifest& m, const ManifestCell& cell, int trial) {
    RunConfig cfg;
    cfg.spec = bench::make_spec(bench::function_from_name(cell.function), cell.dim);
    cfg.algo = sched::algo_from_name(cell.algo);
    for (const auto& [key, value] : m.defaults) detail::apply_config_key(cfg, key, value);
    for (const auto& [key, value] : cell.overrides) detail::apply_config_key(cfg, key, value);
    cfg.seed = m.seed_base + static_cast<std::uint64_t>(trial);
    return cfg;
}

// Serialized form of one trial. Contains the effective config echo and the
// run outputs; wall time stays out so reruns are byte-identical.
inline nlohmann::ordered_json result_document(const RunConfig& raw, const RunResult& result) {
    RunConfig cfg = with_defaults(raw);
    nlohmann::ordered_json doc;
    doc["config"] = {{"function", bench::function_name(cfg.spec.id)},
                     {"dim", cfg.spec.dimension},
                     {"algo", sched::algo_name(cfg.algo)},
                     {"seed", cfg.seed},
                     {"max_fes", cfg.max_fes},
                     {"np_init", cfg.np_init},
                     {"np_min", cfg.np_min},
                     {"len", cfg.schedule.len},
                     {"k", cfg.schedule.k},
                     {"q", cfg.schedule.q},
                     {"history_stride", cfg.history_stride}};
    doc["best_f"] = result.best_f;
    auto history = nlohmann::ordered_json::array();
    for (const auto& point : result.history) {
        history.push_back(nlohmann::ordered_json::array({point.fes, point.best}));
    }
    doc["history"] = std::move(history);
    auto usage = nlohmann::ordered_json::array();
    for (auto label : result.usage_trace) usage.push_back(engines::label_name(label));
    doc["usage"] = std::move(usage);
    doc["trigger_fraction"] = result.trigger_fraction;
    return doc;
}

namespace detail {

inline std::string sci(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.5E", v);
    return buf;
}

// Runs tasks 0..n-1 on `jobs` threads. Worker exceptions are captured and
// reported per task through `on_error`.
template <class Task>
void parallel_tasks(long long n, int jobs, Task task) {
    if (jobs <= 1 || n <= 1) {
        for (long long i = 0; i < n; ++i) task(i);
        return;
    }
    std::atomic<long long> next{0};
    auto worker = [&] {
        for (;;) {
            long long i = next.fetch_add(1);
            if (i >= n) return;
            task(i);
        }
    };
    std::vector<std::thread> pool;
    int n_threads = std::min<long long>(jobs, n);
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

}  // namespace detail

struct CellOutcome {
    ManifestCell cell;
    std::vector<double> best_f;  // per-trial report values, trial order
    std::vector<std::string> errors;
    bool ok() const { return errors.empty(); }
};

struct ExperimentOutcome {
    std::vector<CellOutcome> cells;
    int cells_failed = 0;
};

// Aggregate CSV across cells. mean_rank is only defined when the cells form
// a complete algorithm-by-problem grid; vs_baseline compares each cell to
// the first cell's algorithm on the same problem.
inline std::string render_summary_csv(const ExperimentOutcome& outcome) {
    std::ostringstream csv;
    csv << "function,dim,algo,trials,mean,std,median,mean_rank,vs_baseline\n";

    using GroupKey = std::pair<std::string, int>;
    std::vector<GroupKey> groups;
    std::vector<std::string> algos;
    bool complete_grid = true;
    for (const auto& c : outcome.cells) {
        if (!c.ok()) {
            complete_grid = false;
            continue;
        }
        GroupKey g{c.cell.function, c.cell.dim};
        if (std::find(groups.begin(), groups.end(), g) == groups.end()) groups.push_back(g);
        if (std::find(algos.begin(), algos.end(), c.cell.algo) == algos.end()) {
            algos.push_back(c.cell.algo);
        }
    }
    auto find_cell = [&](const GroupKey& g, const std::string& algo) -> const CellOutcome* {
        const CellOutcome* found = nullptr;
        for (const auto& c : outcome.cells) {
            if (c.ok() && c.cell.function == g.first && c.cell.dim == g.second &&
                c.cell.algo == algo) {
                if (found) return nullptr;  // duplicate entry, grid is ambiguous
                found = &c;
            }
        }
        return found;
    };

    std::map<std::string, double> mean_rank;
    if (complete_grid && !groups.empty() && algos.size() > 1) {
        std::vector<std::vector<double>> table(algos.size(),
                                               std::vector<double>(groups.size(), 0.0));
        for (std::size_t a = 0; a < algos.size() && complete_grid; ++a) {
            for (std::size_t g = 0; g < groups.size(); ++g) {
                const CellOutcome* c = find_cell(groups[g], algos[a]);
                if (!c) {
                    complete_grid = false;
                    break;
                }
                table[a][g] = stats::mean(c->best_f);
            }
        }
        if (complete_grid) {
            auto ranks = stats::average_rank(table);
            for (std::size_t a = 0; a < algos.size(); ++a) mean_rank[algos[a]] = ranks[a];
        }
    }

    const std::string baseline_algo = outcome.cells.empty() ? "" : outcome.cells.front().cell.algo;
    for (const auto& c : outcome.cells) {
        if (!c.ok()) continue;
        csv << c.cell.function << ',' << c.cell.dim << ',' << c.cell.algo << ','
            << c.best_f.size() << ',' << detail::sci(stats::mean(c.best_f)) << ','
            << detail::sci(stats::sample_stddev(c.best_f)) << ','
            << detail::sci(stats::median(c.best_f)) << ',';
        auto mr = mean_rank.find(c.cell.algo);
        if (mr != mean_rank.end()) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.2f", mr->second);
            csv << buf;
        }
        csv << ',';
        const CellOutcome* base =
            find_cell({c.cell.function, c.cell.dim}, baseline_algo);
        if (base == &c) {
            csv << '=';
        } else if (base && base->best_f.size() == c.best_f.size()) {
            auto w = stats::wilcoxon_signed_rank(c.best_f, base->best_f);
            csv << stats::comparison_mark(w.verdict);
        }
        csv << '\n';
    }
    return csv.str();
}

inline std::string trial_file_name(std::size_t cell_index, const ManifestCell& cell, int trial) {
    std::ostringstream name;
    name << "cell" << cell_index << '_' << cell.function << cell.dim << '_' << cell.algo
         << "_trial" << trial << ".json";
    return name.str();
}

// Runs every (cell, trial) pair, persists per-trial documents and the
// aggregate CSV under out_dir, and always writes status.txt. Failed cells
// keep their error text and stay out of the aggregates.
inline ExperimentOutcome run_experiment(const Manifest& m, const std::filesystem::path& out_dir,
                                        int jobs) {
    std::filesystem::create_directories(out_dir);
    auto n_cells = m.cells.size();
    auto n_trials = static_cast<std::size_t>(m.trials);

    struct TrialSlot {
        RunConfig cfg;
        RunResult result;
        std::string error;
        bool ok = false;
    };
    std::vector<TrialSlot> slots(n_cells * n_trials);
    if (jobs < 1) {
        jobs = static_cast<int>(std::thread::hardware_concurrency());
        if (jobs < 1) jobs = 1;
    }

    detail::parallel_tasks(static_cast<long long>(slots.size()), jobs, [&](long long task) {
        auto cell_index = static_cast<std::size_t>(task) / n_trials;
        int trial = static_cast<int>(static_cast<std::size_t>(task) % n_trials);
        TrialSlot& slot = slots[static_cast<std::size_t>(task)];
        try {
            slot.cfg = config_for_cell(m, m.cells[cell_index], trial);
            slot.result = run_trial(slot.cfg);
            slot.ok = true;
        } catch (const std::exception& e) {
            slot.error = e.what();
        }
    });

    ExperimentOutcome outcome;
    outcome.cells.reserve(n_cells);
    for (std::size_t c = 0; c < n_cells; ++c) {
        CellOutcome cell_out;
        cell_out.cell = m.cells[c];
        for (std::size_t t = 0; t < n_trials; ++t) {
            const TrialSlot& slot = slots[c * n_trials + t];
            if (!slot.ok) {
                cell_out.errors.push_back("trial " + std::to_string(t) + ": " + slot.error);
                continue;
            }
            cell_out.best_f.push_back(slot.result.best_f);
            auto doc = result_document(slot.cfg, slot.result);
            std::ofstream out(out_dir / trial_file_name(c, m.cells[c], static_cast<int>(t)));
            out << doc.dump(2) << '\n';
        }
        if (!cell_out.ok()) ++outcome.cells_failed;
        outcome.cells.push_back(std::move(cell_out));
    }

    {
        std::ofstream status(out_dir / "status.txt");
        for (std::size_t c = 0; c < n_cells; ++c) {
            const auto& cell_out = outcome.cells[c];
            status << "cell " << c << ' ' << cell_out.cell.function << ' ' << cell_out.cell.dim
                   << ' ' << cell_out.cell.algo;
            if (cell_out.ok()) {
                status << ": ok (" << cell_out.best_f.size() << " trials)\n";
            } else {
                status << ": failed (" << cell_out.errors.front() << ")\n";
            }
        }
        status << (outcome.cells_failed == 0 ? "all cells ok\n"
                                             : std::to_string(outcome.cells_failed) +
                                                   " cell(s) failed\n");
    }
    {
        std::ofstream csv(out_dir / "summary.csv");
        csv << render_summary_csv(outcome);
    }
    return outcome;
}

}  // namespace eade::harness
