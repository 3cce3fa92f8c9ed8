#pragma once

#include <Eigen/Core>
#include <memory>
#include <optional>

#include "nosas/assembly.hpp"
#include "nosas/coarse.hpp"
#include "nosas/linalg.hpp"
#include "nosas/mesh.hpp"
#include "nosas/partition.hpp"

namespace nosas {

// M^{-1} = R_0^T A_0^{-1} R_0 + sum_i R_i^T A_II^{(i)-1} R_i
class Preconditioner {
public:
    Preconditioner(std::shared_ptr<const DofPartition> part, std::shared_ptr<const LocalProblems> local,
                   std::shared_ptr<const CoarseSpace> coarse, int threads = 0);

    Eigen::VectorXd apply(const Eigen::VectorXd& r) const;
    LinearMap as_map() const;

    CoarseKind kind() const { return coarse_->kind(); }
    const CoarseSpace& coarse() const { return *coarse_; }
    const DofPartition& partition() const { return *part_; }
    const LocalProblems& local() const { return *local_; }

private:
    std::shared_ptr<const DofPartition> part_;
    std::shared_ptr<const LocalProblems> local_;
    std::shared_ptr<const CoarseSpace> coarse_;
    int threads_;
};

Preconditioner build_preconditioner(const GlobalSystem& system, const StructuredMesh& mesh,
                                    const CoefficientField& coeffs, const DofPartition& part,
                                    const CoarseSpec& spec, int threads = 0);

Eigen::VectorXd apply(const Preconditioner& p, const Eigen::VectorXd& r);

struct BoundReport {
    CoarseKind kind = CoarseKind::nosas_exact;
    double lambda_min_eta = 0.0;     // min_i of the first eigenvalue at or above eta
    double theoretical_upper = 0.0;  // 0 when the kind carries no bound
    double lambda_upper = 0.0;       // 2 (exact) or 4 (inexact)
    double measured_cond = 0.0;
    double measured_lambda_min = 0.0;
    double measured_lambda_max = 0.0;
    bool from_verify = false;
    bool has_bound() const { return theoretical_upper > 0.0; }
    bool satisfied() const { return !has_bound() || measured_cond <= theoretical_upper * 1.01; }
};

double theoretical_bound(CoarseKind kind, double lambda_min_eta);
double smallest_excluded_eigenvalue(const CoarseSpace& space);

// Uses verify mode when the system has at most verify_mode_limit unknowns,
// otherwise the PCG Lanczos estimate for the system's right-hand side.
BoundReport bound_report(const Preconditioner& p, const GlobalSystem& system, double rtol = 1e-6,
                         int max_iter = 1000);

} // namespace nosas
