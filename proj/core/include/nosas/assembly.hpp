#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <array>

#include "nosas/mesh.hpp"
#include "nosas/partition.hpp"

namespace nosas {

using SparseMatrix = Eigen::SparseMatrix<double>;

// Neumann matrix of one subdomain in (Gamma_i, interior) block form.
struct SubdomainMatrices {
    Eigen::MatrixXd a_gg;
    SparseMatrix a_gi;
    SparseMatrix a_ii;
    Eigen::VectorXd b_g;
    Eigen::VectorXd b_i;

    // Full block matrix [[a_gg, a_gi], [a_ig, a_ii]].
    SparseMatrix neumann() const;
};

struct GlobalSystem {
    SparseMatrix a;  // free dofs, partition ordering
    Eigen::VectorXd b;
};

Eigen::Matrix3d element_stiffness(const std::array<Point, 3>& v, double rho);

SubdomainMatrices assemble_subdomain(const StructuredMesh& mesh, const CoefficientField& coeffs,
                                     const DofPartition& part, int i);

GlobalSystem assemble_global(const StructuredMesh& mesh, const CoefficientField& coeffs,
                             const DofPartition& part);

// Sum over elements of rho_K |u|^2_{H^1(K)} for a free-dof vector u.
double energy(const StructuredMesh& mesh, const CoefficientField& coeffs, const DofPartition& part,
              const Eigen::VectorXd& u);

} // namespace nosas
