#include "nosas/assembly.hpp"

#include <cmath>
#include <unordered_map>
#include <vector>

#include "nosas/errors.hpp"

namespace nosas {

using Triplet = Eigen::Triplet<double>;

Eigen::Matrix3d element_stiffness(const std::array<Point, 3>& v, double rho)
{
    const double det = (v[1].x - v[0].x) * (v[2].y - v[0].y) - (v[2].x - v[0].x) * (v[1].y - v[0].y);
    if (std::abs(det) <= 1e-300) throw DegenerateGeometry("triangle has zero area");
    const Eigen::Vector3d b(v[1].y - v[2].y, v[2].y - v[0].y, v[0].y - v[1].y);
    const Eigen::Vector3d c(v[2].x - v[1].x, v[0].x - v[2].x, v[1].x - v[0].x);
    return rho * (b * b.transpose() + c * c.transpose()) / (2.0 * std::abs(det));
}

namespace {

// Both triangle shapes of the structured mesh, rho = 1. Independent of h.
std::array<Eigen::Matrix3d, 2> reference_stiffness(const StructuredMesh& mesh)
{
    std::array<Eigen::Matrix3d, 2> k;
    for (int t = 0; t < 2; ++t) {
        const auto& e = mesh.element(t);
        k[t] = element_stiffness({mesh.coord(e[0]), mesh.coord(e[1]), mesh.coord(e[2])}, 1.0);
    }
    return k;
}

double load_per_vertex(const StructuredMesh& mesh) { return mesh.h() * mesh.h() / 6.0; }

} // namespace

SparseMatrix SubdomainMatrices::neumann() const
{
    const Eigen::Index g = a_gg.rows(), ni = a_ii.rows();
    std::vector<Triplet> trip;
    for (Eigen::Index c = 0; c < g; ++c)
        for (Eigen::Index r = 0; r < g; ++r)
            if (a_gg(r, c) != 0.0) trip.emplace_back(r, c, a_gg(r, c));
    for (Eigen::Index k = 0; k < a_gi.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a_gi, k); it; ++it) {
            trip.emplace_back(it.row(), g + it.col(), it.value());
            trip.emplace_back(g + it.col(), it.row(), it.value());
        }
    for (Eigen::Index k = 0; k < a_ii.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(a_ii, k); it; ++it)
            trip.emplace_back(g + it.row(), g + it.col(), it.value());
    SparseMatrix out(g + ni, g + ni);
    out.setFromTriplets(trip.begin(), trip.end());
    return out;
}

SubdomainMatrices assemble_subdomain(const StructuredMesh& mesh, const CoefficientField& coeffs,
                                     const DofPartition& part, int i)
{
    if (i < 0 || i >= part.num_subdomains()) throw ShapeError("subdomain index out of range");
    const auto kref = reference_stiffness(mesh);
    const SubdomainDofs& s = part.sub(i);
    const int g = static_cast<int>(s.gamma.size());
    const int ni = static_cast<int>(s.interior.size());

    std::unordered_map<int, int> local;  // mesh node -> position in [gamma, interior]
    for (int k = 0; k < g; ++k) local[s.gamma_nodes[k]] = k;
    for (int k = 0; k < ni; ++k) local[s.interior_nodes[k]] = g + k;

    SubdomainMatrices sm;
    sm.a_gg = Eigen::MatrixXd::Zero(g, g);
    sm.b_g = Eigen::VectorXd::Zero(g);
    sm.b_i = Eigen::VectorXd::Zero(ni);
    std::vector<Triplet> gi, ii;
    const double load = load_per_vertex(mesh);

    const int m = mesh.cells_per_subdomain_side(), n = mesh.cells_per_side();
    for (int cj = s.sy * m; cj < (s.sy + 1) * m; ++cj) {
        for (int ci = s.sx * m; ci < (s.sx + 1) * m; ++ci) {
            for (int t = 0; t < 2; ++t) {
                const int e = 2 * (cj * n + ci) + t;
                const auto& nodes = mesh.element(e);
                const double rho = coeffs.rho[e];
                std::array<int, 3> loc;
                for (int a = 0; a < 3; ++a) {
                    auto it = local.find(nodes[a]);
                    loc[a] = it == local.end() ? -1 : it->second;
                }
                for (int a = 0; a < 3; ++a) {
                    if (loc[a] < 0) continue;
                    if (loc[a] < g) sm.b_g[loc[a]] += load;
                    else sm.b_i[loc[a] - g] += load;
                    for (int b = 0; b < 3; ++b) {
                        if (loc[b] < 0) continue;
                        const double v = rho * kref[t](a, b);
                        if (loc[a] < g && loc[b] < g) sm.a_gg(loc[a], loc[b]) += v;
                        else if (loc[a] < g) gi.emplace_back(loc[a], loc[b] - g, v);
                        else if (loc[b] >= g) ii.emplace_back(loc[a] - g, loc[b] - g, v);
                    }
                }
            }
        }
    }
    sm.a_gi.resize(g, ni);
    sm.a_gi.setFromTriplets(gi.begin(), gi.end());
    sm.a_ii.resize(ni, ni);
    sm.a_ii.setFromTriplets(ii.begin(), ii.end());
    return sm;
}

GlobalSystem assemble_global(const StructuredMesh& mesh, const CoefficientField& coeffs,
                             const DofPartition& part)
{
    if (static_cast<int>(coeffs.rho.size()) != mesh.num_elements())
        throw ShapeError("coefficient field does not match mesh");
    const auto kref = reference_stiffness(mesh);
    const double load = load_per_vertex(mesh);
    GlobalSystem sys;
    sys.b = Eigen::VectorXd::Zero(part.num_free());
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(mesh.num_elements()) * 9);
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& nodes = mesh.element(e);
        const int t = e % 2;
        for (int a = 0; a < 3; ++a) {
            const int da = part.dof_of_node(nodes[a]);
            if (da < 0) continue;
            sys.b[da] += load;
            for (int b = 0; b < 3; ++b) {
                const int db = part.dof_of_node(nodes[b]);
                if (db < 0) continue;
                trip.emplace_back(da, db, coeffs.rho[e] * kref[t](a, b));
            }
        }
    }
    sys.a.resize(part.num_free(), part.num_free());
    sys.a.setFromTriplets(trip.begin(), trip.end());
    return sys;
}

double energy(const StructuredMesh& mesh, const CoefficientField& coeffs, const DofPartition& part,
              const Eigen::VectorXd& u)
{
    const auto kref = reference_stiffness(mesh);
    double total = 0.0;
    for (int e = 0; e < mesh.num_elements(); ++e) {
        const auto& nodes = mesh.element(e);
        Eigen::Vector3d ue;
        for (int a = 0; a < 3; ++a) {
            const int d = part.dof_of_node(nodes[a]);
            ue[a] = d < 0 ? 0.0 : u[d];
        }
        total += coeffs.rho[e] * ue.dot(kref[e % 2] * ue);
    }
    return total;
}

} // namespace nosas
