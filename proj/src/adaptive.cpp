#include "spvi/adaptive.hpp"

#include <chrono>
#include <cmath>
#include <limits>

namespace spvi {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double run_efficiency(EstimatorChoice choice, const TraceRow& row) {
    switch (choice) {
        case EstimatorChoice::EtaStd: return row.eta_std / row.err_energy;
        case EstimatorChoice::EtaNr: return row.eta_nr / row.err_h1;
        default: return row.eta / row.err_energy;
    }
}
}  // namespace

std::vector<int> mark_mean_value(const Eigen::VectorXd& indicators, double factor) {
    if (indicators.size() == 0)
        throw std::invalid_argument("mark_mean_value: empty indicator vector");
    const double mean = indicators.sum() / static_cast<double>(indicators.size());
    std::vector<int> marked;
    for (int e = 0; e < indicators.size(); ++e)
        if (indicators[e] > factor * mean) marked.push_back(e);
    return marked;
}

AdaptiveResult run_adaptive(const AdaptiveConfig& config, const ProblemDefinition& problem,
                            const std::function<void(const TraceRow&)>& row_sink) {
    Mesh mesh = problem.initial_mesh;
    const int pre = config.initial_refinements.value_or(problem.default_initial_refinements);
    for (int i = 0; i < pre; ++i) mesh = uniform_refine(mesh);
    if (config.max_elements <= problem.initial_mesh.element_count())
        throw std::invalid_argument("run_adaptive: max_elements below the initial element count");

    std::vector<char> warm_active;
    bool have_warm = false;

    AdaptiveResult result;
    int iteration = 0;
    while (true) {
        const auto t0 = std::chrono::steady_clock::now();

        const SparseOperator op = assemble_operator(mesh, problem.data.epsilon);
        ObstacleSystem sys;
        sys.mesh = &mesh;
        sys.op = op;
        sys.load = assemble_load(mesh, problem.data);
        sys.obstacle = interpolate(mesh, problem.data.obstacle);
        sys.dirichlet.assign(mesh.vertex_count(), 0);
        sys.dirichlet_values = Eigen::VectorXd::Zero(mesh.vertex_count());
        for (int p = 0; p < mesh.vertex_count(); ++p) {
            if (mesh.node_kind(p) == NodeKind::Dirichlet) {
                sys.dirichlet[p] = 1;
                sys.dirichlet_values[p] =
                    problem.data.dirichlet(mesh.vertex(p).x, mesh.vertex(p).y);
            }
        }

        std::vector<PdasIterationRecord> pdas_records;
        DiscreteSolution sol = solve_pdas(sys, config.pdas, have_warm ? &warm_active : nullptr,
                                          config.pdas_sink ? &pdas_records : nullptr);
        if (config.pdas_sink) config.pdas_sink(iteration, pdas_records);

        const PatchIndex patches = build_patches(mesh);
        EstimatorBreakdown breakdown = compute_estimator(mesh, patches, sol, sys.obstacle,
                                                         problem.data, config.estimator_opts);

        TraceRow row;
        row.iteration = iteration;
        row.n_elements = mesh.element_count();
        row.n_nodes = mesh.vertex_count();
        row.n_dofs = 0;
        for (int p = 0; p < mesh.vertex_count(); ++p)
            if (!sys.dirichlet[p]) ++row.n_dofs;
        row.eta_k = breakdown.eta_k;
        row.eta = breakdown.eta;
        row.eta_rss = breakdown.eta_rss;
        row.eta_std = breakdown.eta_std;
        row.eta_nr = breakdown.eta_nr;
        row.osc_f = breakdown.osc_f;
        row.osc_pi = breakdown.osc_pi;
        if (problem.exact) {
            const ErrorNorms err = energy_error(mesh, sol.phi, *problem.exact,
                                                problem.data.epsilon, problem.cut_by_kink);
            row.err_energy = err.energy;
            row.err_h1 = err.h1;
            row.eff_index = run_efficiency(config.estimator, row);
        } else {
            row.err_energy = row.err_h1 = row.eff_index = kNaN;
        }
        row.pdas_iterations = sol.iterations;
        row.kkt_feasibility = feasibility_residual(sys, sol);
        row.kkt_complementarity = complementarity_residual(sys, sol);
        row.lambda_min_contact = 0.0;
        for (int p = 0; p < mesh.vertex_count(); ++p)
            if (sol.active[p]) row.lambda_min_contact = std::min(row.lambda_min_contact, sol.lambda[p]);
        row.eta123_full_contact = 0.0;
        row.eta4_only_semi = true;
        for (int p = 0; p < mesh.vertex_count(); ++p) {
            if (breakdown.node_class[p] == NodeClass::FullContact)
                row.eta123_full_contact += breakdown.eta_node[0][p] + breakdown.eta_node[1][p] +
                                           breakdown.eta_node[2][p];
            if (breakdown.eta_node[3][p] != 0.0 &&
                breakdown.node_class[p] != NodeClass::SemiContact)
                row.eta4_only_semi = false;
        }
        row.wall_time_s =
            config.reference_mode
                ? 0.0
                : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (row_sink) row_sink(row);
        result.trace.rows.push_back(row);

        if (mesh.element_count() >= config.max_elements) {
            result.solution = std::move(sol);
            result.breakdown = std::move(breakdown);
            break;
        }

        Eigen::VectorXd indicators = breakdown.indicator(config.estimator);
        if (config.mark_on_squared) indicators = indicators.cwiseProduct(indicators);
        const std::vector<int> marked = mark_mean_value(indicators, config.marking_factor);
        if (marked.empty()) {
            result.solution = std::move(sol);
            result.breakdown = std::move(breakdown);
            break;
        }

        BisectResult refined = bisect(mesh, marked);
        warm_active = refined.prolongation.apply_flags(sol.active);
        have_warm = true;
        mesh = std::move(refined.mesh);
        ++iteration;
    }
    result.mesh = std::move(mesh);
    return result;
}

std::vector<EocRow> efficiency_and_eoc(const AdaptiveTrace& trace, EstimatorChoice choice) {
    std::vector<EocRow> out;
    for (std::size_t i = 0; i < trace.rows.size(); ++i) {
        const TraceRow& row = trace.rows[i];
        EocRow r;
        r.iteration = row.iteration;
        r.efficiency_index = run_efficiency(choice, row);
        r.eoc_energy = kNaN;
        if (i > 0) {
            const TraceRow& prev = trace.rows[i - 1];
            const double e0 = prev.err_energy, e1 = row.err_energy;
            if (std::isfinite(e0) && std::isfinite(e1) && e0 > 0.0 && e1 > 0.0 &&
                row.n_dofs > prev.n_dofs)
                r.eoc_energy = -std::log(e1 / e0) /
                               std::log(static_cast<double>(row.n_dofs) / prev.n_dofs);
        }
        out.push_back(r);
    }
    return out;
}

double tail_eoc(const AdaptiveTrace& trace, int window) {
    const int n = static_cast<int>(trace.rows.size());
    if (n < window || window < 2) return kNaN;
    const TraceRow& first = trace.rows[n - window];
    const TraceRow& last = trace.rows[n - 1];
    if (!(first.err_energy > 0.0) || !(last.err_energy > 0.0) || last.n_dofs <= first.n_dofs)
        return kNaN;
    return -std::log(last.err_energy / first.err_energy) /
           std::log(static_cast<double>(last.n_dofs) / first.n_dofs);
}

}  // namespace spvi
