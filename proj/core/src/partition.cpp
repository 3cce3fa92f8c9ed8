#include "nosas/partition.hpp"

#include "nosas/errors.hpp"

namespace nosas {

DofPartition::DofPartition(const StructuredMesh& mesh)
{
    const int S = mesh.subdomains_per_side();
    const int m = mesh.cells_per_subdomain_side();
    const int nn = mesh.num_nodes();
    auto on_interface = [&](int v) {
        return !mesh.is_dirichlet(v) && (mesh.node_i(v) % m == 0 || mesh.node_j(v) % m == 0);
    };

    node_dof_.assign(nn, -1);
    for (int v = 0; v < nn; ++v) {
        if (on_interface(v)) {
            node_dof_[v] = static_cast<int>(dof_node_.size());
            dof_node_.push_back(v);
        }
    }
    n_gamma_ = static_cast<int>(dof_node_.size());
    multiplicity_.assign(n_gamma_, 0);

    subs_.resize(static_cast<std::size_t>(S) * S);
    for (int sy = 0; sy < S; ++sy) {
        for (int sx = 0; sx < S; ++sx) {
            SubdomainDofs& s = subs_[sy * S + sx];
            s.sx = sx;
            s.sy = sy;
            s.floating = sx > 0 && sy > 0 && sx < S - 1 && sy < S - 1;
            s.boundary_nodes = 4 * m;
            const int x0 = sx * m, y0 = sy * m;
            for (int b = 0; b <= m; ++b) {
                for (int a = 0; a <= m; ++a) {
                    const int v = mesh.node(x0 + a, y0 + b);
                    if (mesh.is_dirichlet(v)) continue;
                    const bool edge = a == 0 || b == 0 || a == m || b == m;
                    if (edge) {
                        BoundaryPlace p;
                        if (a == 0 && b == 0) p = BoundaryPlace::corner_ll;
                        else if (a == m && b == 0) p = BoundaryPlace::corner_lr;
                        else if (a == m && b == m) p = BoundaryPlace::corner_ur;
                        else if (a == 0 && b == m) p = BoundaryPlace::corner_ul;
                        else if (b == 0) p = BoundaryPlace::bottom;
                        else if (a == m) p = BoundaryPlace::right;
                        else if (b == m) p = BoundaryPlace::top;
                        else p = BoundaryPlace::left;
                        s.gamma.push_back(node_dof_[v]);
                        s.place.push_back(p);
                        s.gamma_nodes.push_back(v);
                        ++multiplicity_[node_dof_[v]];
                    } else {
                        node_dof_[v] = static_cast<int>(dof_node_.size());
                        dof_node_.push_back(v);
                        s.interior.push_back(node_dof_[v]);
                        s.interior_nodes.push_back(v);
                    }
                }
            }
        }
    }
}

DofPartition build_partition(const StructuredMesh& mesh) { return DofPartition(mesh); }

namespace {
const std::vector<int>& index_set(const DofPartition& p, int i, Block which)
{
    if (i < 0 || i >= p.num_subdomains()) throw ShapeError("subdomain index out of range");
    return which == Block::gamma ? p.sub(i).gamma : p.sub(i).interior;
}
} // namespace

Eigen::VectorXd gather(const DofPartition& p, int i, const Eigen::VectorXd& global, Block which)
{
    if (global.size() != p.num_free())
        throw ShapeError("gather: vector has " + std::to_string(global.size()) + " entries, expected " +
                         std::to_string(p.num_free()));
    const auto& idx = index_set(p, i, which);
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t k = 0; k < idx.size(); ++k) out[static_cast<Eigen::Index>(k)] = global[idx[k]];
    return out;
}

void scatter_add(const DofPartition& p, int i, const Eigen::VectorXd& local, Block which,
                 Eigen::VectorXd& global)
{
    const auto& idx = index_set(p, i, which);
    if (global.size() != p.num_free() || local.size() != static_cast<Eigen::Index>(idx.size()))
        throw ShapeError("scatter_add: dimension mismatch");
    for (std::size_t k = 0; k < idx.size(); ++k) global[idx[k]] += local[static_cast<Eigen::Index>(k)];
}

} // namespace nosas
