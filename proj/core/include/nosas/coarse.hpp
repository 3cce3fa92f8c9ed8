#pragma once

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/Cholesky>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "nosas/assembly.hpp"
#include "nosas/linalg.hpp"
#include "nosas/partition.hpp"

namespace nosas {

enum class CoarseKind { harmonic, aas, mes, nosas_exact, nosas_block, nosas_diagonal };

std::string to_string(CoarseKind k);
CoarseKind coarse_kind_from_string(const std::string& s);

inline bool is_nosas(CoarseKind k)
{
    return k == CoarseKind::nosas_exact || k == CoarseKind::nosas_block || k == CoarseKind::nosas_diagonal;
}
inline bool is_inexact(CoarseKind k) { return k == CoarseKind::nosas_block || k == CoarseKind::nosas_diagonal; }

struct CoarseSpec {
    CoarseKind kind = CoarseKind::nosas_exact;
    double c = 0.25;  // eta = c * h / H
};

double threshold(const CoarseSpec& spec, const StructuredMesh& mesh);

// Subdomain matrices plus the factorization of the interior block.
struct LocalProblem {
    SubdomainMatrices mats;
    SpdFactorization a_ii;
};
using LocalProblems = std::vector<LocalProblem>;

LocalProblems build_local_problems(const StructuredMesh& mesh, const CoefficientField& coeffs,
                                   const DofPartition& part, int threads = 0);

// Right-hand side matrix of the eigenproblem: A_GG (harmonic, AAS, MES, exact),
// its per-edge block diagonal, or its diagonal.
Eigen::MatrixXd interface_matrix(const SubdomainMatrices& sm, const SubdomainDofs& dofs, CoarseKind kind);

// One subdomain's share of the coarse problem.
//   coarse matrix contribution: a_hat - u * inv(kinv) * u^T
//   interior extension:         ext_left * (ext_right * u_gamma_i)
// For NOSAS kinds the spectral data (q, p, d, qaq) is filled as well.
struct SubdomainCoarse {
    Eigen::MatrixXd a_hat;
    Eigen::MatrixXd u;
    Eigen::MatrixXd kinv;
    Eigen::MatrixXd ext_left;
    Eigen::MatrixXd ext_right;

    Eigen::VectorXd eigenvalues;  // full spectrum, ascending
    int kept = 0;
    Eigen::MatrixXd q;
    Eigen::MatrixXd p;
    Eigen::VectorXd d;
    Eigen::MatrixXd qaq;
    bool degenerate = false;  // every eigenvalue fell below eta

    int rank() const { return static_cast<int>(u.cols()); }
    // Eigenvalue just above the threshold, if any.
    std::optional<double> first_excluded() const;
    Eigen::MatrixXd coarse_matrix() const;
    Eigen::MatrixXd extension() const { return ext_left * ext_right; }
};

SubdomainCoarse aas_basis(const SubdomainMatrices& sm, const SubdomainDofs& dofs);
SubdomainCoarse mes_basis(const SubdomainMatrices& sm, const SubdomainDofs& dofs);
SubdomainCoarse nosas_basis(const SubdomainMatrices& sm, const SpdFactorization& a_ii,
                            const SubdomainDofs& dofs, CoarseKind kind, double eta);

// (A_hat - U K U^T)^{-1} via the Woodbury identity.
class CoarseOperator {
public:
    CoarseOperator() = default;
    CoarseOperator(const std::vector<SubdomainCoarse>& bases, const DofPartition& part, CoarseKind kind);

    Eigen::VectorXd apply_inverse(const Eigen::VectorXd& r_gamma) const;
    // Dense coarse matrix, for checks on small problems.
    Eigen::MatrixXd dense_matrix() const;
    int rank() const { return static_cast<int>(u_.cols()); }
    int size() const { return n_; }

private:
    Eigen::VectorXd solve_hat(const Eigen::VectorXd& r) const;

    int n_ = 0;
    bool diagonal_ = false;
    bool spd_core_ = true;
    SparseMatrix a_hat_;
    Eigen::VectorXd inv_diag_;
    SpdFactorization hat_fact_;
    SparseMatrix u_;
    Eigen::MatrixXd kinv_;
    Eigen::MatrixXd hinv_u_;
    Eigen::LLT<Eigen::MatrixXd> core_llt_;
    Eigen::PartialPivLU<Eigen::MatrixXd> core_lu_;
};

CoarseOperator assemble_coarse(const std::vector<SubdomainCoarse>& bases, const DofPartition& part,
                               CoarseKind kind);
Eigen::VectorXd apply_coarse_inverse(const CoarseOperator& op, const Eigen::VectorXd& r_gamma);

// Coarse space of one preconditioner: basis records, coarse solve, and the
// extension R_0^T from the interface to all free dofs.
class CoarseSpace {
public:
    CoarseSpace(std::shared_ptr<const DofPartition> part, std::shared_ptr<const LocalProblems> local,
                CoarseSpec spec, double eta, int threads = 0);

    CoarseKind kind() const { return spec_.kind; }
    double eta() const { return eta_; }
    int dimension() const;  // N_E (|Gamma| for harmonic)
    const std::vector<SubdomainCoarse>& bases() const { return bases_; }
    const CoarseOperator& op() const { return op_; }

    Eigen::VectorXd prolong(const Eigen::VectorXd& w_gamma) const;
    Eigen::VectorXd restrict_residual(const Eigen::VectorXd& r) const;
    Eigen::VectorXd solve(const Eigen::VectorXd& r_gamma) const;

private:
    std::shared_ptr<const DofPartition> part_;
    std::shared_ptr<const LocalProblems> local_;
    CoarseSpec spec_;
    double eta_;
    std::vector<SubdomainCoarse> bases_;
    CoarseOperator op_;
    SpdFactorization schur_fact_;  // harmonic only
};

Eigen::VectorXd coarse_prolong(const CoarseSpace& space, const Eigen::VectorXd& w_gamma);
Eigen::VectorXd coarse_restrict(const CoarseSpace& space, const Eigen::VectorXd& r);

} // namespace nosas
