// Command-line driver for adaptive obstacle-problem experiments.
//
// Example:
//   spvi --problem example1 --eps 0.4 --eps 0.2 --estimator eta \
//        --estimator eta_nr --max-elements 20000 --out results

#include <iostream>

#include <CLI11.hpp>

#include "spvi/io.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Adaptive FEM for singularly perturbed reaction-diffusion obstacle problems"};

    spvi::RunConfig config;
    std::vector<std::string> estimator_names{"eta"};
    std::string out_dir = "results";
    config.problem = "example1";

    app.add_option("--problem", config.problem, "Problem name (example1, example2)");
    app.add_option("--problem-file", config.problem_file,
                   "JSON problem descriptor (overrides --problem)");
    app.add_option("--eps", config.eps, "Perturbation parameter (repeatable)")->required();
    app.add_option("--estimator", estimator_names,
                   "Estimator driving refinement: eta, eta_std, eta_nr (repeatable)");
    app.add_option("--marking-factor", config.marking_factor,
                   "Mean-value marking factor (default 1.2)");
    app.add_flag("--mark-squared", config.mark_on_squared,
                 "Take the mean over squared element indicators");
    app.add_option("--max-elements", config.max_elements,
                   "Stop once the element count passes this (default 20000)");
    app.add_option("--initial-refinements", [&config](const std::vector<std::string>& v) {
        config.initial_refinements = std::stoi(v.back());
        return true;
    }, "Override the problem's uniform pre-refinement count");
    app.add_option("--out", out_dir, "Output directory (default: results)");
    app.add_flag("--reference-mode", config.reference_mode,
                 "Deterministic single-threaded mode with zeroed wall times");
    app.add_option("--jobs", config.jobs, "Worker pool size (default 1)");
    app.add_flag("--pdas-diagnostics", config.pdas_diagnostics,
                 "Write per-solve active-set/residual CSV rows");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    config.out_dir = out_dir;
    try {
        config.estimators.clear();
        for (const auto& name : estimator_names)
            config.estimators.push_back(spvi::estimator_from_name(name));
        return spvi::run(config, std::cout);
    } catch (const spvi::ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
