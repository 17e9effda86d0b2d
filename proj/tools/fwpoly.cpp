// fwpoly: solve min-norm / projection problems over V-polytopes, compute
// polytope condition measures, and run seeded randomized experiments.
//
// Exit codes: 0 success, 1 input error, 2 non-convergence, 3 guard/cap hit.

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "fwpoly/conditioning.hpp"
#include "fwpoly/experiments.hpp"
#include "fwpoly/geometry.hpp"
#include "fwpoly/io.hpp"
#include "fwpoly/solvers.hpp"
#include "fwpoly/stats.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNoConverge = 2;
constexpr int kExitGuard = 3;

std::uint64_t env_default_seed() {
    // FWPOLY_SEED overrides the default seed (0) when no --seed / config seed
    // is given.
    const char* env = std::getenv("FWPOLY_SEED");
    if (!env || !*env) return 0;
    try {
        return std::stoull(env);
    } catch (const std::exception&) {
        throw fwpoly::ParseError(std::string("FWPOLY_SEED is not an integer: '") + env + "'",
                                 0);
    }
}

void print_config(const std::vector<std::pair<std::string, std::string>>& kv) {
    for (const auto& [k, v] : kv) std::cout << "config: " << k << "=" << v << "\n";
}

std::string solution_text(const fwpoly::SolveResult& res, const fwpoly::QuadraticObjective& obj,
                          int iterations, bool converged) {
    using fwpoly::format_double;
    std::ostringstream out;
    out << "x =";
    for (double v : res.x) out << " " << format_double(v);
    out << "\n";
    out << "objective = " << format_double(obj.value(res.x)) << "\n";
    out << "gap = " << format_double(res.trace.final_residual) << "\n";
    out << "certificate_residual = " << format_double(res.certificate.residual) << "\n";
    out << "iterations = " << iterations << "\n";
    out << "converged = " << (converged ? 1 : 0) << "\n";
    out << "active =";
    for (int i : res.certificate.active_indices) out << " " << i;
    out << "\n";
    out << "weights =";
    for (double w : res.certificate.weights) out << " " << format_double(w);
    out << "\n";
    return out.str();
}

int cmd_solve(const std::string& vertex_file, const std::string& variant,
              const std::vector<double>& target, double tol, int max_iter,
              const std::string& output) {
    print_config({{"subcommand", "solve"},
                  {"vertices", vertex_file},
                  {"variant", variant},
                  {"tol", fwpoly::format_double(tol)},
                  {"max_iter", std::to_string(max_iter)},
                  {"output", output.empty() ? "(stdout)" : output}});
    fwpoly::PointSet ps = fwpoly::read_vertex_file(vertex_file);
    if (!target.empty() && static_cast<int>(target.size()) != ps.dim)
        throw fwpoly::ParseError("--target has " + std::to_string(target.size()) +
                                     " coordinates, vertices have " + std::to_string(ps.dim),
                                 0);
    fwpoly::Vec b = target.empty() ? fwpoly::Vec(ps.dim, 0.0) : target;
    fwpoly::QuadraticObjective obj = fwpoly::QuadraticObjective::distance_to(b);

    fwpoly::SolveResult res;
    if (variant == "wolfe") {
        // min ||x - b|| == translate, min-norm, translate back
        std::vector<fwpoly::Vec> shifted;
        for (const fwpoly::Vec& p : ps.points) shifted.push_back(fwpoly::sub(p, b));
        res = fwpoly::wolfe_mnp(fwpoly::PointSet(ps.dim, shifted), tol);
        for (int j = 0; j < ps.dim; ++j) res.x[j] += b[j];
    } else if (variant == "away") {
        res = fwpoly::fw_away(ps, obj, {}, max_iter, tol);
    } else if (variant == "pairwise") {
        res = fwpoly::fw_pairwise(ps, obj, {}, max_iter, tol);
    } else {
        res = fwpoly::fw_vanilla(ps, obj, {}, max_iter, tol);
    }
    const int iterations = static_cast<int>(res.trace.records.size());
    const bool converged = res.trace.converged;
    const std::string text = solution_text(res, obj, iterations, converged);
    std::cout << text;
    if (!output.empty()) {
        std::ofstream out(output);
        if (!out) throw fwpoly::ParseError("cannot write solution file '" + output + "'", 0);
        out << text;
    }
    return converged ? kExitOk : kExitNoConverge;
}

int cmd_cond(const std::string& vertex_file, int cube_d, int subset_cap, bool no_minwidth,
             const std::string& csv_out) {
    print_config({{"subcommand", "cond"},
                  {"input", cube_d > 0 ? "cube d=" + std::to_string(cube_d) : vertex_file},
                  {"subset_cap", std::to_string(subset_cap)},
                  {"minwidth", no_minwidth ? "skipped" : "requested"},
                  {"csv", csv_out.empty() ? "(none)" : csv_out}});
    fwpoly::MeasureReport rep;
    if (cube_d > 0) {
        rep = fwpoly::cube_report(cube_d);
    } else {
        fwpoly::PointSet ps = fwpoly::read_vertex_file(vertex_file);
        rep = fwpoly::measure_report(ps, no_minwidth ? 0 : subset_cap);
    }
    // Chain re-check before anything is written.
    if (rep.minwidth && *rep.minwidth > rep.phi + 1e-8 * std::max(1.0, rep.phi))
        throw std::runtime_error("chain violation: minwidth > facial distance");
    if (rep.phi > rep.vf + 1e-8 * std::max(1.0, rep.vf))
        throw std::runtime_error("chain violation: facial distance > vf");
    std::cout << rep.to_kv();
    if (!csv_out.empty()) {
        std::ofstream out(csv_out);
        if (!out) throw fwpoly::ParseError("cannot write csv file '" + csv_out + "'", 0);
        out << fwpoly::MeasureReport::csv_header() << "\n" << rep.to_csv_row() << "\n";
    }
    return kExitOk;
}

void write_trials_csv(const std::string& path, const fwpoly::ExperimentConfig& cfg,
                      const fwpoly::ExperimentResult& res) {
    fwpoly::CsvTable t;
    t.comments = {"experiment=" + cfg.name, "kind=trials",
                  "seed=" + std::to_string(cfg.seed)};
    t.header = res.columns;
    for (const fwpoly::TrialRecord& rec : res.trials) t.rows.push_back(rec.values);
    fwpoly::write_csv_file(path, t);
}

void write_summary_csv(const std::string& path, const fwpoly::ExperimentConfig& cfg,
                       const fwpoly::ExperimentResult& res) {
    fwpoly::CsvTable t;
    t.comments = {"experiment=" + cfg.name, "kind=summary",
                  "seed=" + std::to_string(cfg.seed)};
    std::vector<double> row;
    for (const auto& [k, v] : res.summary) {
        t.header.push_back(k);
        row.push_back(v);
    }
    t.rows.push_back(row);
    fwpoly::write_csv_file(path, t);
}

int cmd_experiment(const std::string& config_file, std::optional<std::uint64_t> seed_flag,
                   int jobs_flag, const std::string& output_flag) {
    std::map<std::string, std::string> kv = fwpoly::read_config_file(config_file);
    fwpoly::ExperimentConfig cfg = fwpoly::parse_experiment_config(kv);
    if (seed_flag) {
        cfg.seed = *seed_flag;
    } else if (!kv.count("seed")) {
        cfg.seed = env_default_seed();
    }
    if (jobs_flag > 0)
        cfg.jobs = jobs_flag;
    else if (!kv.count("jobs"))
        cfg.jobs = std::max(1u, std::thread::hardware_concurrency());
    if (!output_flag.empty()) cfg.output = output_flag;
    if (cfg.output.empty()) cfg.output = cfg.name;

    std::vector<std::pair<std::string, std::string>> echo{{"subcommand", "experiment"},
                                                          {"config", config_file}};
    for (const auto& [k, v] : kv)
        if (k != "seed" && k != "jobs" && k != "output") echo.emplace_back(k, v);
    echo.emplace_back("seed", std::to_string(cfg.seed));
    echo.emplace_back("jobs", std::to_string(cfg.jobs));
    echo.emplace_back("output", cfg.output);
    print_config(echo);

    fwpoly::ExperimentResult res = fwpoly::run_experiment(cfg);
    const std::string trials_path = cfg.output + "_trials.csv";
    const std::string summary_path = cfg.output + "_summary.csv";
    write_trials_csv(trials_path, cfg, res);
    write_summary_csv(summary_path, cfg, res);
    std::cout << "wrote " << trials_path << " (" << res.trials.size() << " rows)\n";
    std::cout << "wrote " << summary_path << "\n";
    for (const auto& [k, v] : res.summary)
        std::cout << "summary: " << k << " = " << fwpoly::format_double(v) << "\n";
    return kExitOk;
}

std::map<std::string, std::string> comment_map(const fwpoly::CsvTable& t) {
    std::map<std::string, std::string> m;
    for (const std::string& c : t.comments) {
        const size_t eq = c.find('=');
        if (eq != std::string::npos) m[c.substr(0, eq)] = c.substr(eq + 1);
    }
    return m;
}

int cmd_report(const std::vector<std::string>& inputs, const std::string& prefix) {
    print_config({{"subcommand", "report"},
                  {"inputs", std::to_string(inputs.size()) + " file(s)"},
                  {"prefix", prefix}});
    // Group trial files by experiment; headers within a group must agree.
    std::map<std::string, std::pair<std::vector<std::string>, std::vector<fwpoly::TrialRecord>>>
        groups;
    for (const std::string& path : inputs) {
        fwpoly::CsvTable t = fwpoly::read_csv_file(path);
        std::map<std::string, std::string> meta = comment_map(t);
        const std::string exp = meta.count("experiment") ? meta["experiment"] : "";
        if (exp.empty())
            throw fwpoly::ParseError("'" + path + "' lacks an '# experiment=' comment", 0);
        if (meta["kind"] == "summary") {
            std::cout << "summary file " << path << ":\n";
            for (size_t i = 0; i < t.header.size(); ++i)
                std::cout << "  " << t.header[i] << " = "
                          << fwpoly::format_double(t.rows.at(0).at(i)) << "\n";
            continue;
        }
        auto& [header, rows] = groups[exp];
        if (header.empty()) {
            header = t.header;
        } else if (header != t.header) {
            throw fwpoly::ParseError("'" + path + "' header does not match earlier '" + exp +
                                         "' trial files",
                                     0);
        }
        for (std::vector<double>& r : t.rows) rows.push_back({std::move(r)});
    }
    for (auto& [exp, data] : groups) {
        auto& [header, rows] = data;
        auto summary = fwpoly::summarize_trials(exp, header, rows);
        std::cout << "experiment " << exp << " (" << rows.size() << " trials)\n";
        for (const auto& [k, v] : summary)
            std::cout << "  " << k << " = " << fwpoly::format_double(v) << "\n";
        // Plot data: summary families keyed by dimension become (d, value)
        // series, e.g. median_d5 / q25_d5 / min_d5 / facet_median_d5.
        std::map<std::string, std::vector<std::pair<int, double>>> series;
        for (const auto& [k, v] : summary) {
            const size_t pos = k.rfind("_d");
            if (pos == std::string::npos) continue;
            const std::string tail = k.substr(pos + 2);
            if (tail.empty() ||
                tail.find_first_not_of("0123456789") != std::string::npos)
                continue;
            series[k.substr(0, pos)].emplace_back(std::stoi(tail), v);
        }
        for (const auto& [family, pts] : series) {
            const std::string path = prefix + "_" + exp + "_" + family + ".dat";
            std::ofstream out(path);
            if (!out) throw std::runtime_error("cannot write plot file '" + path + "'");
            for (const auto& [d, v] : pts)
                out << d << " " << fwpoly::format_double(v) << "\n";
            std::cout << "wrote " << path << "\n";
        }
    }
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frank-Wolfe polytope conditioning toolkit"};
    app.require_subcommand(1);

    // solve
    std::string solve_file, solve_variant = "wolfe", solve_output;
    std::vector<double> solve_target;
    double solve_tol = 1e-10;
    int solve_max_iter = 100000;
    CLI::App* solve = app.add_subcommand("solve", "Solve a projection / min-norm problem");
    solve->add_option("vertices", solve_file, "vertex file (one point per line)")->required();
    solve->add_option("--variant", solve_variant, "wolfe|away|pairwise|vanilla")
        ->check(CLI::IsMember({"wolfe", "away", "pairwise", "vanilla"}));
    solve->add_option("--target", solve_target,
                      "target point b for min 1/2||x-b||^2 (default: origin)");
    solve->add_option("--tol", solve_tol, "duality-gap / corral tolerance");
    solve->add_option("--max-iter", solve_max_iter, "iteration cap for FW variants");
    solve->add_option("-o,--output", solve_output, "also write the solution to this file");

    // cond
    std::string cond_file, cond_csv;
    int cond_cube = 0, cond_cap = 12;
    bool cond_no_minwidth = false;
    CLI::App* cond = app.add_subcommand("cond", "Compute condition measures");
    cond->add_option("vertices", cond_file, "vertex file");
    cond->add_option("--cube", cond_cube, "use the unit cube [0,1]^d instead of a file");
    cond->add_option("--subset-cap", cond_cap, "max point count for exhaustive minwidth");
    cond->add_flag("--no-minwidth", cond_no_minwidth, "skip the exponential minwidth scan");
    cond->add_option("--csv", cond_csv, "write the report as a one-row CSV");

    // experiment
    std::string exp_config, exp_output;
    std::optional<std::uint64_t> exp_seed;
    int exp_jobs = 0;
    CLI::App* exper = app.add_subcommand("experiment", "Run a named experiment from a config");
    exper->add_option("config", exp_config, "key=value config file")->required();
    exper->add_option("--seed", exp_seed, "override the config / FWPOLY_SEED seed");
    exper->add_option("--jobs", exp_jobs, "worker threads (default: available cores)");
    exper->add_option("--output", exp_output, "output path prefix");

    // report
    std::vector<std::string> rep_inputs;
    std::string rep_prefix = "report";
    CLI::App* report = app.add_subcommand("report", "Aggregate trial CSVs");
    report->add_option("trials", rep_inputs, "trial/summary CSV files")->required();
    report->add_option("--prefix", rep_prefix, "plot-data file prefix");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) ? kExitInput : kExitOk;
    }

    try {
        if (solve->parsed())
            return cmd_solve(solve_file, solve_variant, solve_target, solve_tol,
                             solve_max_iter, solve_output);
        if (cond->parsed()) {
            if (cond_cube <= 0 && cond_file.empty()) {
                std::cerr << "error: cond needs a vertex file or --cube d\n";
                return kExitInput;
            }
            return cmd_cond(cond_file, cond_cube, cond_cap, cond_no_minwidth, cond_csv);
        }
        if (exper->parsed()) return cmd_experiment(exp_config, exp_seed, exp_jobs, exp_output);
        if (report->parsed()) return cmd_report(rep_inputs, rep_prefix);
    } catch (const fwpoly::CapExceeded& e) {
        std::cerr << "guard: " << e.what() << "\n";
        return kExitGuard;
    } catch (const fwpoly::ParseError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const fwpoly::DegenerateInput& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNoConverge;
    }
    return kExitInput;
}
