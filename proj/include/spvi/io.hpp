#pragma once

#include <filesystem>
#include <iosfwd>

#include "spvi/adaptive.hpp"

namespace spvi {

class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// Batch configuration: one job per (eps, estimator) pair.
struct RunConfig {
    std::string problem;
    std::string problem_file;  // optional JSON descriptor; overrides `problem`
    std::vector<double> eps;
    std::vector<EstimatorChoice> estimators;
    double marking_factor = 1.2;
    bool mark_on_squared = false;
    int max_elements = 20000;
    std::optional<int> initial_refinements;
    std::filesystem::path out_dir;
    bool reference_mode = false;
    int jobs = 1;
    bool pdas_diagnostics = false;
};

const char* estimator_name(EstimatorChoice c);
EstimatorChoice estimator_from_name(const std::string& name);

/// Throws ConfigError on invalid input (exit code 2 in the CLI).
void validate(const RunConfig& config);

struct JobSummary {
    std::string problem;
    double eps = 0.0;
    EstimatorChoice estimator = EstimatorChoice::Eta;
    std::filesystem::path directory;
    bool failed = false;
    std::string error;
    AdaptiveTrace trace;
};

/// Runs the cartesian product of (eps, estimator), writing one result bundle
/// per job (trace.csv, mesh.json, estimator.csv, indicators.csv,
/// metadata.json) plus efficiency_summary.csv and eoc_summary.csv. Returns
/// process exit code: 0 on success, 1 if any job failed.
int run(const RunConfig& config, std::ostream& log);

/// Summary tables over completed jobs (final-iteration efficiency per run and
/// the per-iteration EOC table).
void write_efficiency_summary(const std::vector<JobSummary>& jobs, std::ostream& os);
void write_eoc_summary(const std::vector<JobSummary>& jobs, std::ostream& os);

void write_trace_csv(const AdaptiveTrace& trace, std::ostream& os);

}  // namespace spvi
