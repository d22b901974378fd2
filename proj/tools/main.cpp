#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "eibounds/csv.hpp"
#include "eibounds/district_bounds.hpp"
#include "eibounds/errors.hpp"
#include "eibounds/report.hpp"
#include "eibounds/selection_eval.hpp"
#include "eibounds/simulation.hpp"

namespace {

using namespace eib;

std::vector<double> parse_x_grid(const std::string& text) {
    std::vector<double> grid;
    const auto colon = text.find(':');
    if (colon != std::string::npos) {
        // start:end:step
        double start, end, step;
        char c1, c2;
        std::istringstream in(text);
        if (!(in >> start >> c1 >> end >> c2 >> step) || c1 != ':' ||
            c2 != ':' || step <= 0.0 || end < start) {
            throw validation_error("cannot parse x grid '" + text +
                                   "'; expected start:end:step or a comma "
                                   "separated list");
        }
        for (double x = start; x <= end + 1e-12; x += step) {
            grid.push_back(x);
        }
        return grid;
    }
    std::istringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        try {
            grid.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw validation_error("cannot parse x grid entry '" + item + "'");
        }
    }
    if (grid.empty()) {
        throw validation_error("x grid is empty");
    }
    return grid;
}

struct AnalysisFlags {
    double lambda = 1.0;
    std::string bounds = "range";
    std::string prop;
    std::string lu = "auto";
    std::string weights = "unit";
    std::string cov = "hc1";
    std::string x_grid;
    int bins = 10;
    int min_bin_count = 20;
    bool white = false;
};

void add_analysis_flags(CLI::App* cmd, AnalysisFlags& f) {
    cmd->add_option("--lambda", f.lambda,
                    "weight on observed vs fitted precinct outcomes, in [0, 1]")
        ->capture_default_str();
    cmd->add_option("--bounds", f.bounds,
                    "constraint family for the white-group slope")
        ->check(CLI::IsMember({"range", "full", "binned"}))
        ->capture_default_str();
    cmd->add_option("--prop", f.prop,
                    "alias for --bounds: 2 = range, 3 = full, nonparam = binned")
        ->check(CLI::IsMember({"2", "3", "nonparam"}));
    cmd->add_option("--lu", f.lu,
                    "group-share domain as 'l,u', or 'auto' to use the data "
                    "range")
        ->capture_default_str();
    cmd->add_option("--weights", f.weights, "regression weights")
        ->check(CLI::IsMember({"unit", "population"}))
        ->capture_default_str();
    cmd->add_option("--cov", f.cov, "covariance estimator")
        ->check(CLI::IsMember({"hc1", "hc0"}))
        ->capture_default_str();
    cmd->add_option("--x-grid,--x", f.x_grid,
                    "critical multipliers, 'start:end:step' or a comma list "
                    "(default 0:2:0.25)");
    cmd->add_option("--bins", f.bins, "bin count for --bounds binned")
        ->capture_default_str();
    cmd->add_option("--min-bin-count", f.min_bin_count,
                    "minimum precincts per bin for --bounds binned")
        ->capture_default_str();
    cmd->add_flag("--white", f.white,
                  "analyze the complementary group (swaps x with 1-x)");
}

AnalysisConfig build_config(const AnalysisFlags& f) {
    AnalysisConfig cfg;
    cfg.lambda = f.lambda;
    std::string bounds = f.bounds;
    if (!f.prop.empty()) {
        if (f.prop == "2") bounds = "range";
        else if (f.prop == "3") bounds = "full";
        else bounds = "binned";
    }
    if (bounds == "range") cfg.bounds = BoundSource::range;
    else if (bounds == "full") cfg.bounds = BoundSource::full;
    else cfg.bounds = BoundSource::binned;
    if (f.lu != "auto") {
        double l, u;
        char c;
        std::istringstream in(f.lu);
        if (!(in >> l >> c >> u) || c != ',') {
            throw validation_error("cannot parse --lu '" + f.lu +
                                   "'; expected 'l,u' or 'auto'");
        }
        cfg.lu = {l, u};
    }
    cfg.weights =
        f.weights == "population" ? WeightKind::population : WeightKind::unit;
    cfg.cov = f.cov == "hc0" ? CovKind::hc0 : CovKind::hc1;
    if (!f.x_grid.empty()) cfg.x_grid = parse_x_grid(f.x_grid);
    cfg.bins = f.bins;
    cfg.min_bin_count = f.min_bin_count;
    return cfg;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        if (!text.empty() && text.back() != '\n') std::cout << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw io_error("cannot open '" + path + "' for writing");
    out << text;
    if (!text.empty() && text.back() != '\n') out << '\n';
    if (!out.flush()) throw io_error("failed writing '" + path + "'");
}

// Minimal filename matching with '*' and '?'.
bool glob_match(const std::string& pattern, const std::string& name) {
    std::size_t p = 0, s = 0;
    std::size_t star = std::string::npos, mark = 0;
    while (s < name.size()) {
        if (p < pattern.size() &&
            (pattern[p] == '?' || pattern[p] == name[s])) {
            ++p;
            ++s;
        } else if (p < pattern.size() && pattern[p] == '*') {
            star = p++;
            mark = s;
        } else if (star != std::string::npos) {
            p = star + 1;
            s = ++mark;
        } else {
            return false;
        }
    }
    while (p < pattern.size() && pattern[p] == '*') ++p;
    return p == pattern.size();
}

std::vector<std::string> expand_glob(const std::string& pattern) {
    namespace fs = std::filesystem;
    const fs::path pat(pattern);
    fs::path dir = pat.parent_path();
    if (dir.empty()) dir = ".";
    const std::string leaf = pat.filename().string();
    std::vector<std::string> out;
    if (!fs::is_directory(dir)) {
        throw io_error("glob directory '" + dir.string() + "' does not exist");
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        if (glob_match(leaf, entry.path().filename().string())) {
            out.push_back(entry.path().string());
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int run_analyze(const std::vector<std::string>& inputs,
                const AnalysisFlags& flags, const std::string& output) {
    if (inputs.empty()) {
        throw validation_error("no input datasets; pass paths or --input");
    }
    const AnalysisConfig cfg = build_config(flags);
    nlohmann::json out = nlohmann::json::array();
    for (const std::string& path : inputs) {
        Dataset ds = load_csv_file(path);
        if (flags.white) ds = swap_groups(ds);
        out.push_back(analysis_report(analyze(ds, cfg)));
    }
    const std::string text =
        inputs.size() == 1 ? out[0].dump(2) : out.dump(2);
    write_output(output, text);
    return 0;
}

struct SimulateFlags {
    std::string example = "1";
    GeneratorSpec spec;
    std::string noise_scale;
    std::string output;
};

Design parse_design(const std::string& s) {
    if (s == "1") return Design::example1;
    if (s == "2") return Design::example2;
    if (s == "3") return Design::example3;
    if (s == "4") return Design::example4;
    if (s == "5") return Design::example5;
    if (s == "6") return Design::example6;
    if (s == "custom") return Design::custom;
    throw validation_error("unknown design '" + s + "'");
}

int run_simulate(const CLI::App* cmd, SimulateFlags& f) {
    GeneratorSpec spec = default_spec(parse_design(f.example));
    // Only override a default when the flag was actually given.
    if (cmd->count("--p")) spec.p = f.spec.p;
    if (cmd->count("--n")) spec.n = f.spec.n;
    if (cmd->count("--seed")) spec.seed = f.spec.seed;
    if (cmd->count("--T")) spec.T = f.spec.T;
    if (cmd->count("--tau")) spec.tau = f.spec.tau;
    if (cmd->count("--b2")) spec.b2 = f.spec.b2;
    if (cmd->count("--x-lo")) spec.x_lo = f.spec.x_lo;
    if (cmd->count("--x-hi")) spec.x_hi = f.spec.x_hi;
    if (cmd->count("--s")) spec.s = f.spec.s;
    if (cmd->count("--b0")) spec.b0 = f.spec.b0;
    if (cmd->count("--b1")) spec.b1 = f.spec.b1;
    if (cmd->count("--w0")) spec.w0 = f.spec.w0;
    if (cmd->count("--w1")) spec.w1 = f.spec.w1;
    if (cmd->count("--noise")) spec.noise = f.spec.noise;
    if (cmd->count("--n-lo")) spec.n_lo = f.spec.n_lo;
    if (cmd->count("--n-hi")) spec.n_hi = f.spec.n_hi;
    if (!f.noise_scale.empty()) {
        spec.noise_scale = f.noise_scale == "unit" ? NoiseScale::unit
                                                   : NoiseScale::white_share;
    }
    Dataset ds = generate(spec);
    ds.name = (f.example == "custom" ? std::string("custom")
                                     : "example" + f.example) +
              "-seed" + std::to_string(spec.seed);
    std::ostringstream csv;
    write_csv(ds, csv);
    write_output(f.output, csv.str());
    return 0;
}

struct EvaluateFlags {
    std::vector<std::string> inputs;
    std::vector<std::string> globs;
    AnalysisFlags analysis;
    double dd_threshold = 0.7;
    bool heuristic2 = false;
    int workers = 0;
    std::string output;
    std::string format = "csv";
};

int run_evaluate(EvaluateFlags& f) {
    std::vector<std::string> paths = f.inputs;
    for (const std::string& g : f.globs) {
        for (std::string& p : expand_glob(g)) paths.push_back(std::move(p));
    }
    if (paths.empty()) {
        throw validation_error("no input datasets; pass --input or --glob");
    }

    EvalConfig cfg;
    cfg.analysis = build_config(f.analysis);
    cfg.dd_width_threshold = f.dd_threshold;
    cfg.use_heuristic_2 = f.heuristic2;

    int workers = f.workers;
    if (workers <= 0) {
        if (const char* env = std::getenv("EIBOUNDS_WORKERS")) {
            workers = std::atoi(env);
        }
    }
    if (workers <= 0) {
        workers = static_cast<int>(std::thread::hardware_concurrency());
    }
    workers = std::max(1, std::min<int>(workers, static_cast<int>(paths.size())));

    std::vector<std::optional<EvaluationRecord>> results(paths.size());
    std::vector<std::string> errors(paths.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= paths.size()) return;
            try {
                Dataset ds = load_csv_file(paths[i]);
                if (f.analysis.white) ds = swap_groups(ds);
                results[i] = evaluate_dataset(ds, cfg);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(work);
        for (std::thread& th : pool) th.join();
    }

    std::vector<EvaluationRecord> records;
    for (std::size_t i = 0; i < paths.size(); ++i) {
        if (results[i]) {
            records.push_back(std::move(*results[i]));
        } else {
            std::cerr << "skipping '" << paths[i] << "': " << errors[i] << '\n';
        }
    }
    if (records.empty()) {
        throw validation_error("every input dataset failed to evaluate");
    }

    std::vector<double> grid = cfg.analysis.x_grid.empty()
                                   ? default_x_grid()
                                   : cfg.analysis.x_grid;
    const std::vector<AggregateRow> rows = aggregate_report(records, grid);
    if (f.format == "json") {
        write_output(f.output, evaluation_report(records, rows, cfg).dump(2));
    } else {
        write_output(f.output, aggregate_csv(rows));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "Partial-identification bounds and conservative confidence intervals "
        "for a district-level group rate from precinct aggregates"};
    app.require_subcommand(1);

    // analyze
    auto* analyze_cmd = app.add_subcommand(
        "analyze", "bound the district rate for one or more datasets");
    std::vector<std::string> analyze_inputs;
    AnalysisFlags analyze_flags;
    std::string analyze_output;
    analyze_cmd->add_option("paths", analyze_inputs, "dataset CSV path(s)");
    analyze_cmd
        ->add_option("-i,--input", analyze_inputs,
                     "dataset CSV path(s), same as the positional form")
        ->take_all();
    add_analysis_flags(analyze_cmd, analyze_flags);
    analyze_cmd->add_option("-o,--output", analyze_output,
                            "output path (default stdout)");

    // simulate
    auto* sim_cmd =
        app.add_subcommand("simulate", "generate a synthetic dataset");
    SimulateFlags sim;
    sim_cmd->add_option("--example", sim.example,
                        "data process: 1-6 or custom")
        ->check(CLI::IsMember({"1", "2", "3", "4", "5", "6", "custom"}))
        ->capture_default_str();
    sim_cmd->add_option("--p", sim.spec.p, "precinct count");
    sim_cmd->add_option("--n", sim.spec.n, "people per precinct");
    sim_cmd->add_option("--seed", sim.spec.seed, "random seed");
    sim_cmd->add_option("--T", sim.spec.T, "common precinct outcome level");
    sim_cmd->add_option("--tau", sim.spec.tau, "rate-gap parameter");
    sim_cmd->add_option("--b2", sim.spec.b2, "quadratic coefficient");
    sim_cmd->add_option("--x-lo", sim.spec.x_lo, "group-share lower limit");
    sim_cmd->add_option("--x-hi", sim.spec.x_hi, "group-share upper limit");
    sim_cmd->add_option("--s", sim.spec.s, "latent noise scale");
    sim_cmd->add_option("--b0", sim.spec.b0, "black-rate intercept");
    sim_cmd->add_option("--b1", sim.spec.b1, "black-rate slope");
    sim_cmd->add_option("--w0", sim.spec.w0, "white-rate intercept");
    sim_cmd->add_option("--w1", sim.spec.w1, "white-rate slope");
    sim_cmd->add_option("--noise-scale", sim.noise_scale,
                        "how latent noise scales with the group share")
        ->check(CLI::IsMember({"white-share", "unit"}));
    sim_cmd->add_option("--noise", sim.spec.noise,
                        "uniform residual amplitude (custom design)");
    sim_cmd->add_option("--n-lo", sim.spec.n_lo,
                        "integer precinct size lower limit (custom design)");
    sim_cmd->add_option("--n-hi", sim.spec.n_hi,
                        "integer precinct size upper limit (custom design)");
    sim_cmd->add_option("-o,--output", sim.output,
                        "output path (default stdout)");

    // evaluate
    auto* eval_cmd = app.add_subcommand(
        "evaluate",
        "run selection heuristics and capture metrics over datasets with "
        "ground truth");
    EvaluateFlags ev;
    eval_cmd->add_option("--input", ev.inputs, "dataset CSV path(s)");
    eval_cmd->add_option("--glob", ev.globs,
                         "filename pattern(s) with * and ?, e.g. 'data/*.csv'");
    add_analysis_flags(eval_cmd, ev.analysis);
    eval_cmd->add_option("--dd-threshold", ev.dd_threshold,
                         "deterministic-width cutoff for the second heuristic")
        ->capture_default_str();
    eval_cmd->add_flag("--heuristic2", ev.heuristic2,
                       "also reject districts with wide deterministic bounds");
    eval_cmd->add_option("--workers", ev.workers,
                         "worker threads (default EIBOUNDS_WORKERS or all "
                         "cores)");
    eval_cmd->add_option("-o,--output", ev.output,
                         "output path (default stdout)");
    eval_cmd->add_option("--format", ev.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
        if (analyze_cmd->parsed()) {
            return run_analyze(analyze_inputs, analyze_flags, analyze_output);
        }
        if (sim_cmd->parsed()) {
            return run_simulate(sim_cmd, sim);
        }
        return run_evaluate(ev);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const io_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
