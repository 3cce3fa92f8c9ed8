#pragma once

#include <Eigen/Core>
#include <vector>

#include "nosas/mesh.hpp"
#include "nosas/partition.hpp"

namespace nosas {

struct Island {
    int elements = 0;
    bool touches_gamma = false;
    bool touches_dirichlet = false;
    bool qualifies() const { return touches_gamma && !touches_dirichlet; }
};

struct IslandReport {
    int subdomain = 0;
    bool floating = false;
    std::vector<Island> components;
    int qualifying = 0;
    // Qualifying islands; a floating subdomain without one still has the zero eigenvalue.
    int predicted_small = 0;
    int observed_small = -1;
};

// Components of elements with rho >= high_cut in subdomain i; two elements are
// connected when they share a node.
IslandReport find_islands(const StructuredMesh& mesh, const CoefficientField& coeffs, const DofPartition& part,
                          int i, double high_cut);

// Number of eigenvalues below sqrt(rho2 / rho1).
int observed_small_count(const Eigen::VectorXd& eigenvalues, double rho1, double rho2);

} // namespace nosas
