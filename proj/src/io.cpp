#include "spvi/io.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

namespace spvi {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string short_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

nlohmann::json metadata_json(const RunConfig& config, const ProblemDefinition& problem,
                             double eps, EstimatorChoice estimator) {
    nlohmann::json meta;
    meta["schema_version"] = 1;
    meta["problem"] = problem.name;
    meta["eps"] = eps;
    meta["estimator"] = estimator_name(estimator);
    meta["marking_factor"] = config.marking_factor;
    meta["marking_mean_over"] = config.mark_on_squared ? "squared indicators" : "indicators";
    meta["max_elements"] = config.max_elements;
    meta["initial_refinements"] =
        config.initial_refinements.value_or(problem.default_initial_refinements);
    meta["reference_mode"] = config.reference_mode;
    meta["negated_from_lower_obstacle"] = problem.negated;

    nlohmann::json conv;
    conv["refinement"] = "newest vertex bisection, single bisection plus conformity closure";
    conv["refinement_edge_init"] = "longest edge, ties by smallest opposite-vertex index";
    conv["initial_split"] = "square split along the (v0,v2) diagonal";
    conv["canonical_form"] = "upper obstacle psi <= g";
    conv["volume_quadrature"] = "7-point, degree 5";
    conv["edge_quadrature"] = "4-point Gauss";
    conv["f_bar"] = "centroid value per element";
    conv["pi_bar"] = "midpoint value per edge";
    conv["eta_total"] = "plain sum over k; root-sum-square reported alongside";
    conv["eta_nr"] = "weights h_p and h_p^(1/2) in eta_1..3; contact terms unchanged";
    conv["patch_skeleton"] = "edges touching p";
    conv["pdas_c"] = 1.0;
    meta["conventions"] = conv;

    nlohmann::json tol;
    tol["linear_solve"] = 1e-12;
    tol["feasibility"] = 1e-9;
    tol["complementarity"] = 1e-9;
    tol["contact_scale"] = 1e-9;
    tol["sign_test"] = 1e-12;
    tol["radicand_clip"] = 1e-10;
    meta["tolerances"] = tol;
    return meta;
}

void run_job(const RunConfig& config, JobSummary& job) {
    ProblemDefinition problem;
    if (!config.problem_file.empty()) {
        std::ifstream in(config.problem_file);
        if (!in) throw ConfigError("cannot open problem file '" + config.problem_file + "'");
        nlohmann::json descriptor = nlohmann::json::parse(in);
        problem = problem_from_json(descriptor, job.eps);
    } else {
        problem = make_problem(job.problem, job.eps);
    }
    job.problem = problem.name;

    AdaptiveConfig acfg;
    acfg.estimator = job.estimator;
    acfg.marking_factor = config.marking_factor;
    acfg.mark_on_squared = config.mark_on_squared;
    acfg.max_elements = config.max_elements;
    acfg.initial_refinements = config.initial_refinements;
    acfg.reference_mode = config.reference_mode;

    std::filesystem::create_directories(job.directory);
    std::ofstream pdas_csv;
    if (config.pdas_diagnostics) {
        pdas_csv.open(job.directory / "pdas.csv");
        pdas_csv << "adaptive_iteration,pdas_iteration,active_size,linear_residual\n";
        acfg.pdas_sink = [&pdas_csv](int it, const std::vector<PdasIterationRecord>& recs) {
            for (const auto& r : recs)
                pdas_csv << it << "," << r.iteration << "," << r.active_size << ","
                         << num(r.linear_residual) << "\n";
        };
    }

    const AdaptiveResult result = run_adaptive(acfg, problem);
    job.trace = result.trace;

    {
        std::ofstream os(job.directory / "trace.csv");
        write_trace_csv(result.trace, os);
    }
    {
        std::ofstream os(job.directory / "mesh.json");
        os << result.mesh.to_json().dump(2) << "\n";
    }
    {
        std::ofstream os(job.directory / "estimator.csv");
        write_breakdown_csv(result.breakdown, os);
    }
    {
        std::ofstream os(job.directory / "indicators.csv");
        write_indicator_csv(result.breakdown, job.estimator, os);
    }
    {
        std::ofstream os(job.directory / "metadata.json");
        os << metadata_json(config, problem, job.eps, job.estimator).dump(2) << "\n";
    }
}

}  // namespace

const char* estimator_name(EstimatorChoice c) {
    switch (c) {
        case EstimatorChoice::EtaStd: return "eta_std";
        case EstimatorChoice::EtaNr: return "eta_nr";
        default: return "eta";
    }
}

EstimatorChoice estimator_from_name(const std::string& name) {
    if (name == "eta") return EstimatorChoice::Eta;
    if (name == "eta_std") return EstimatorChoice::EtaStd;
    if (name == "eta_nr") return EstimatorChoice::EtaNr;
    throw ConfigError("unknown estimator '" + name + "' (use eta, eta_std or eta_nr)");
}

void validate(const RunConfig& config) {
    if (config.problem_file.empty() && config.problem != "example1" &&
        config.problem != "example2")
        throw ConfigError("unknown problem '" + config.problem + "'");
    if (config.eps.empty()) throw ConfigError("at least one --eps value is required");
    for (double e : config.eps)
        if (!(e > 0.0)) throw ConfigError("eps must be positive, got " + short_num(e));
    if (config.estimators.empty()) throw ConfigError("at least one --estimator is required");
    if (!(config.marking_factor > 0.0)) throw ConfigError("marking factor must be positive");
    if (config.max_elements <= 0) throw ConfigError("max elements must be positive");
    if (config.jobs <= 0) throw ConfigError("jobs must be positive");
    if (config.out_dir.empty()) throw ConfigError("output directory is required");
    std::error_code ec;
    std::filesystem::create_directories(config.out_dir, ec);
    if (ec) throw ConfigError("cannot create output directory: " + ec.message());
}

void write_trace_csv(const AdaptiveTrace& trace, std::ostream& os) {
    os << "iteration,n_elements,n_nodes,n_dofs,"
          "eta,eta_rss,eta_std,eta_nr,eta1,eta2,eta3,eta4,eta5,eta6,eta7,"
          "osc_f,osc_pi,err_energy,err_h1,eff_index,pdas_iterations,"
          "kkt_feasibility,kkt_complementarity,lambda_min_contact,"
          "eta123_full_contact,eta4_only_semi,wall_time_s\n";
    for (const TraceRow& r : trace.rows) {
        os << r.iteration << "," << r.n_elements << "," << r.n_nodes << "," << r.n_dofs << ","
           << num(r.eta) << "," << num(r.eta_rss) << "," << num(r.eta_std) << ","
           << num(r.eta_nr);
        for (double v : r.eta_k) os << "," << num(v);
        os << "," << num(r.osc_f) << "," << num(r.osc_pi) << "," << num(r.err_energy) << ","
           << num(r.err_h1) << "," << num(r.eff_index) << "," << r.pdas_iterations << ","
           << num(r.kkt_feasibility) << "," << num(r.kkt_complementarity) << ","
           << num(r.lambda_min_contact) << "," << num(r.eta123_full_contact) << ","
           << (r.eta4_only_semi ? 1 : 0) << "," << num(r.wall_time_s) << "\n";
    }
}

void write_efficiency_summary(const std::vector<JobSummary>& jobs, std::ostream& os) {
    os << "problem,eps,estimator,final_nodes,final_dofs,final_err_energy,final_err_h1,"
          "final_eta,final_eta_std,final_eta_nr,efficiency_index\n";
    for (const JobSummary& job : jobs) {
        if (job.failed || job.trace.rows.empty()) continue;
        const TraceRow& last = job.trace.rows.back();
        os << job.problem << "," << short_num(job.eps) << "," << estimator_name(job.estimator)
           << "," << last.n_nodes << "," << last.n_dofs << "," << num(last.err_energy) << ","
           << num(last.err_h1) << "," << num(last.eta) << "," << num(last.eta_std) << ","
           << num(last.eta_nr) << "," << num(last.eff_index) << "\n";
    }
}

void write_eoc_summary(const std::vector<JobSummary>& jobs, std::ostream& os) {
    os << "problem,eps,estimator,iteration,n_dofs,err_energy,eoc_energy,efficiency_index\n";
    for (const JobSummary& job : jobs) {
        if (job.failed) continue;
        const auto rows = efficiency_and_eoc(job.trace, job.estimator);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const TraceRow& t = job.trace.rows[i];
            os << job.problem << "," << short_num(job.eps) << ","
               << estimator_name(job.estimator) << "," << rows[i].iteration << "," << t.n_dofs
               << "," << num(t.err_energy) << ",";
            // Undefined EOC is reported as an empty field, not a number.
            if (std::isfinite(rows[i].eoc_energy)) os << num(rows[i].eoc_energy);
            os << "," << num(rows[i].efficiency_index) << "\n";
        }
    }
}

int run(const RunConfig& config, std::ostream& log) {
    validate(config);

    std::vector<JobSummary> jobs;
    for (double eps : config.eps)
        for (EstimatorChoice est : config.estimators) {
            JobSummary job;
            job.problem = config.problem;
            job.eps = eps;
            job.estimator = est;
            std::string stem = (config.problem_file.empty() ? config.problem : "custom");
            job.directory = config.out_dir /
                            (stem + "_eps" + short_num(eps) + "_" + estimator_name(est));
            jobs.push_back(std::move(job));
        }

    const int workers =
        config.reference_mode ? 1 : std::min<int>(config.jobs, static_cast<int>(jobs.size()));
    std::atomic<std::size_t> next{0};
    std::mutex log_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            JobSummary& job = jobs[i];
            try {
                run_job(config, job);
                std::lock_guard<std::mutex> lock(log_mutex);
                log << "done " << job.directory.filename().string() << " ("
                    << job.trace.rows.size() << " iterations)\n";
            } catch (const std::exception& err) {
                job.failed = true;
                job.error = err.what();
                std::lock_guard<std::mutex> lock(log_mutex);
                log << "FAILED " << job.directory.filename().string() << ": " << err.what()
                    << "\n";
            }
        }
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    {
        std::ofstream os(config.out_dir / "efficiency_summary.csv");
        write_efficiency_summary(jobs, os);
    }
    {
        std::ofstream os(config.out_dir / "eoc_summary.csv");
        write_eoc_summary(jobs, os);
    }

    int failures = 0;
    for (const JobSummary& job : jobs)
        if (job.failed) ++failures;
    if (failures > 0)
        log << failures << " of " << jobs.size() << " jobs failed\n";
    return failures > 0 ? 1 : 0;
}

}  // namespace spvi
