#pragma once

#include <Eigen/Core>
#include <vector>

#include "nosas/mesh.hpp"

namespace nosas {

// Where a node of Gamma_i sits on the boundary of its subdomain. Edges are open
// (corners excluded); corners are the four vertices of the subdomain square.
enum class BoundaryPlace : int { bottom, right, top, left, corner_ll, corner_lr, corner_ur, corner_ul };

struct SubdomainDofs {
    int sx = 0;
    int sy = 0;
    bool floating = false;
    int boundary_nodes = 0;           // m_i: all nodes of the square's boundary, Dirichlet included
    std::vector<int> gamma;           // indices into the interface block (= global dof ids)
    std::vector<BoundaryPlace> place; // per gamma entry
    std::vector<int> interior;        // global dof ids, contiguous
    std::vector<int> gamma_nodes;     // mesh node ids of gamma
    std::vector<int> interior_nodes;  // mesh node ids of interior
};

// Free dofs are numbered interface first, then interiors grouped by subdomain.
class DofPartition {
public:
    explicit DofPartition(const StructuredMesh& mesh);

    int num_free() const { return static_cast<int>(dof_node_.size()); }
    int num_gamma() const { return n_gamma_; }
    int num_subdomains() const { return static_cast<int>(subs_.size()); }

    const SubdomainDofs& sub(int i) const { return subs_[i]; }
    const std::vector<SubdomainDofs>& subs() const { return subs_; }

    // -1 for Dirichlet nodes.
    int dof_of_node(int v) const { return node_dof_[v]; }
    int node_of_dof(int d) const { return dof_node_[d]; }
    // Number of subdomains whose closure contains interface dof g.
    int multiplicity(int g) const { return multiplicity_[g]; }

private:
    int n_gamma_ = 0;
    std::vector<int> node_dof_;
    std::vector<int> dof_node_;
    std::vector<int> multiplicity_;
    std::vector<SubdomainDofs> subs_;
};

enum class Block { gamma, interior };

DofPartition build_partition(const StructuredMesh& mesh);

Eigen::VectorXd gather(const DofPartition& p, int i, const Eigen::VectorXd& global, Block which);
void scatter_add(const DofPartition& p, int i, const Eigen::VectorXd& local, Block which,
                 Eigen::VectorXd& global);

} // namespace nosas
