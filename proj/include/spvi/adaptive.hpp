#pragma once

#include <functional>

#include "spvi/estimator.hpp"
#include "spvi/problems.hpp"

namespace spvi {

struct AdaptiveConfig {
    EstimatorChoice estimator = EstimatorChoice::Eta;
    double marking_factor = 1.2;
    bool mark_on_squared = false;  // alternative mean-value convention
    int max_elements = 20000;
    std::optional<int> initial_refinements;  // overrides the problem default
    PdasOptions pdas;
    EstimatorOptions estimator_opts;
    bool reference_mode = true;  // deterministic, wall times reported as zero
    /// Optional diagnostic sink: per-solve PDAS iteration records.
    std::function<void(int adaptive_iteration, const std::vector<PdasIterationRecord>&)> pdas_sink;
};

/// One row per adaptive iteration. Error and efficiency columns are NaN when
/// the problem has no exact solution.
struct TraceRow {
    int iteration = 0;
    int n_elements = 0;
    int n_nodes = 0;
    int n_dofs = 0;  // free (non-Dirichlet) nodes
    std::array<double, 7> eta_k{};
    double eta = 0.0;
    double eta_rss = 0.0;
    double eta_std = 0.0;
    double eta_nr = 0.0;
    double osc_f = 0.0;
    double osc_pi = 0.0;
    double err_energy = 0.0;
    double err_h1 = 0.0;
    double eff_index = 0.0;  // the driving estimator over its error norm
    int pdas_iterations = 0;
    double kkt_feasibility = 0.0;
    double kkt_complementarity = 0.0;
    double lambda_min_contact = 0.0;  // most negative multiplier on the active set
    double eta123_full_contact = 0.0;  // sum of eta_{1..3,p} over full-contact nodes
    bool eta4_only_semi = true;
    double wall_time_s = 0.0;
};

struct AdaptiveTrace {
    std::vector<TraceRow> rows;
};

struct AdaptiveResult {
    AdaptiveTrace trace;
    Mesh mesh;
    DiscreteSolution solution;
    EstimatorBreakdown breakdown;
};

/// Mean-value marking: elements with indicator > factor * mean(indicator).
std::vector<int> mark_mean_value(const Eigen::VectorXd& indicators, double factor);

/// Solve -> estimate -> mark -> refine until the element count passes
/// config.max_elements (the refined mesh still gets a final solve) or nothing
/// is marked. The PDAS active set is carried to the refined mesh as warm start.
AdaptiveResult run_adaptive(const AdaptiveConfig& config, const ProblemDefinition& problem,
                            const std::function<void(const TraceRow&)>& row_sink = {});

struct EocRow {
    int iteration = 0;             // the finer of the two compared iterations
    double eoc_energy = 0.0;       // NaN when undefined
    double efficiency_index = 0.0;
};

/// Per-iteration efficiency indices and the experimental order of convergence
/// -log(e_{i+1}/e_i) / log(N_{i+1}/N_i) with N the DOF count.
std::vector<EocRow> efficiency_and_eoc(const AdaptiveTrace& trace, EstimatorChoice choice);

/// Endpoint EOC over the trailing `window` rows of a trace.
double tail_eoc(const AdaptiveTrace& trace, int window);

}  // namespace spvi
