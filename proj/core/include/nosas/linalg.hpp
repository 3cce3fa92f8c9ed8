#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <functional>
#include <memory>
#include <vector>

#include "nosas/assembly.hpp"

namespace nosas {

// Sparse LDL^T with AMD ordering; rejects matrices with a non-positive pivot.
class SpdFactorization {
public:
    SpdFactorization() = default;
    explicit SpdFactorization(const SparseMatrix& a);

    Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
    Eigen::MatrixXd solve(const Eigen::MatrixXd& rhs) const;
    int size() const { return n_; }

private:
    int n_ = 0;
    std::shared_ptr<Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>> ldlt_;
};

SpdFactorization factor_spd(const SparseMatrix& a);
Eigen::VectorXd solve_spd(const SpdFactorization& f, const Eigen::VectorXd& rhs);

Eigen::MatrixXd dense_schur(const SubdomainMatrices& sm);
Eigen::MatrixXd dense_schur(const SubdomainMatrices& sm, const SpdFactorization& a_ii);

struct EigenPairs {
    Eigen::VectorXd values;   // ascending
    Eigen::MatrixXd vectors;  // columns, B-orthonormal
};

// Solves s v = lambda b v. Values within 1e-12 * max|lambda| of zero are set to 0.
EigenPairs generalized_symmetric_eigen(const Eigen::MatrixXd& s, const Eigen::MatrixXd& b);

struct PcgReport {
    int iterations = 0;
    bool converged = false;
    std::vector<double> residuals;  // relative, residuals[0] = 1
    std::vector<double> alpha;
    std::vector<double> beta;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond_estimate = 0.0;
};

using LinearMap = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct PcgResult {
    Eigen::VectorXd x;
    PcgReport report;
};

PcgResult pcg(const LinearMap& apply_operator, const LinearMap& apply_preconditioner,
              const Eigen::VectorXd& b, double rtol, int max_iter);

// Extreme eigenvalues of the Lanczos matrix built from CG coefficients.
std::pair<double, double> lanczos_extremes(const std::vector<double>& alpha,
                                           const std::vector<double>& beta);

struct SpectrumBounds {
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double cond() const { return lambda_max / lambda_min; }
};

// Dense eigenvalues of M^{-1} A by materializing both operators; n <= 2000.
constexpr int verify_mode_limit = 2000;
Eigen::VectorXd preconditioned_spectrum(const SparseMatrix& a, const LinearMap& apply_preconditioner);
SpectrumBounds preconditioned_extremes(const SparseMatrix& a, const LinearMap& apply_preconditioner);

} // namespace nosas
