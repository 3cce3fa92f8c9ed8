#include "nosas/islands.hpp"

#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "nosas/errors.hpp"

namespace nosas {

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x)
    {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

} // namespace

IslandReport find_islands(const StructuredMesh& mesh, const CoefficientField& coeffs, const DofPartition& part,
                          int i, double high_cut)
{
    if (i < 0 || i >= part.num_subdomains()) throw ShapeError("subdomain index out of range");
    const SubdomainDofs& s = part.sub(i);
    const int m = mesh.cells_per_subdomain_side(), n = mesh.cells_per_side();

    std::vector<int> high;  // element ids
    for (int cj = s.sy * m; cj < (s.sy + 1) * m; ++cj)
        for (int ci = s.sx * m; ci < (s.sx + 1) * m; ++ci)
            for (int t = 0; t < 2; ++t) {
                const int e = 2 * (cj * n + ci) + t;
                if (coeffs.rho[e] >= high_cut) high.push_back(e);
            }

    DisjointSet ds(static_cast<int>(high.size()));
    std::unordered_map<int, int> first_at_node;  // node -> index into high
    for (int k = 0; k < static_cast<int>(high.size()); ++k) {
        for (int v : mesh.element(high[k])) {
            auto [it, inserted] = first_at_node.emplace(v, k);
            if (!inserted) ds.unite(k, it->second);
        }
    }

    const std::unordered_set<int> gamma(s.gamma_nodes.begin(), s.gamma_nodes.end());
    std::unordered_map<int, int> comp_index;
    IslandReport rep;
    rep.subdomain = i;
    rep.floating = s.floating;
    for (int k = 0; k < static_cast<int>(high.size()); ++k) {
        const int root = ds.find(k);
        auto [it, inserted] = comp_index.emplace(root, static_cast<int>(rep.components.size()));
        if (inserted) rep.components.emplace_back();
        Island& isl = rep.components[it->second];
        ++isl.elements;
        for (int v : mesh.element(high[k])) {
            if (gamma.count(v)) isl.touches_gamma = true;
            if (mesh.is_dirichlet(v)) isl.touches_dirichlet = true;
        }
    }
    for (const auto& c : rep.components)
        if (c.qualifies()) ++rep.qualifying;
    rep.predicted_small = rep.qualifying > 0 ? rep.qualifying : (s.floating ? 1 : 0);
    return rep;
}

int observed_small_count(const Eigen::VectorXd& eigenvalues, double rho1, double rho2)
{
    if (!(rho1 > rho2) || !(rho2 > 0.0))
        throw InvalidParameter("island classification needs rho1 > rho2 > 0");
    const double cut = std::sqrt(rho2 / rho1);
    int count = 0;
    for (Eigen::Index k = 0; k < eigenvalues.size(); ++k)
        if (eigenvalues[k] < cut) ++count;
    return count;
}

} // namespace nosas
