#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nosas/coarse.hpp"
#include "nosas/islands.hpp"
#include "nosas/mesh.hpp"
#include "nosas/precond.hpp"

namespace nosas {

struct ExperimentConfig {
    int subdomains = 4;  // 1/H
    int cells = 8;       // H/h
    PatternSpec pattern;
    CoarseSpec coarse;
    double rtol = 1e-6;
    int max_iter = 1000;
    bool verify = false;
    bool spectra = false;  // keep per-subdomain spectra in the report
    int threads = 0;
    std::string out;

    void validate() const;  // throws InvalidParameter
};

struct Timings {
    double assembly = 0.0;
    double setup = 0.0;  // local factorizations, Schur complements, eigensolves, coarse assembly
    double pcg = 0.0;
    double verify = 0.0;
    double total = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    int dofs = 0;
    int interface_dofs = 0;
    int iterations = 0;
    bool converged = false;
    double final_residual = 0.0;
    double cond_estimate = 0.0;
    double lambda_min_estimate = 0.0;
    double lambda_max_estimate = 0.0;
    std::optional<double> verify_cond;
    std::optional<double> verify_lambda_min;
    std::optional<double> verify_lambda_max;
    int coarse_dim = 0;
    std::vector<int> kept;
    std::vector<std::vector<double>> spectra;
    double eta = 0.0;
    double lambda_min_eta = 0.0;
    double theoretical_upper = 0.0;
    Timings timings;
};

ExperimentReport run_experiment(const ExperimentConfig& config);

// Subdomain class used by the spectrum dump: corner, edge or floating.
std::string subdomain_class(const SubdomainDofs& s, int subdomains_per_side);

// selector: "classes" (first corner, edge and floating subdomain) or a subdomain index.
// Columns: subdomain,class,variant,index,lambda,log10_lambda. Variants exact, block, diagonal.
std::string dump_spectrum(const ExperimentConfig& config, const std::string& selector);

// Island analysis of every subdomain: high-coefficient components (cut at the
// geometric mean of the field's extremes) and, for fields with contrast, the
// number of exact-solver eigenvalues below sqrt(min / max).
std::vector<IslandReport> island_survey(const ExperimentConfig& config);

} // namespace nosas
