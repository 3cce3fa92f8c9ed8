#include "oracles.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace oracle {

Eig jacobi(Eigen::MatrixXd a)
{
    const Eigen::Index n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    const double scale = std::max(a.norm(), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (Eigen::Index p = 0; p < n; ++p)
            for (Eigen::Index q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (std::sqrt(off) <= 1e-15 * scale) break;
        for (Eigen::Index p = 0; p < n; ++p) {
            for (Eigen::Index q = p + 1; q < n; ++q) {
                if (a(p, q) == 0.0) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (Eigen::Index k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto x, auto y) { return a(x, x) < a(y, y); });
    Eig out{Eigen::VectorXd(n), Eigen::MatrixXd(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        out.values[k] = a(order[k], order[k]);
        out.vectors.col(k) = v.col(order[k]);
    }
    return out;
}

Eig generalized(const Eigen::MatrixXd& s, const Eigen::MatrixXd& b)
{
    const Eig eb = jacobi(b);
    const Eigen::MatrixXd half_inv =
        eb.vectors * eb.values.cwiseSqrt().cwiseInverse().asDiagonal() * eb.vectors.transpose();
    Eigen::MatrixXd c = half_inv * s * half_inv;
    c = 0.5 * (c + c.transpose()).eval();
    Eig e = jacobi(c);
    e.vectors = half_inv * e.vectors;
    return e;
}

Eigen::MatrixXd dense(const nosas::SparseMatrix& a) { return Eigen::MatrixXd(a); }

Eigen::MatrixXd five_point(const nosas::StructuredMesh& mesh, const nosas::DofPartition& part)
{
    const int n = mesh.cells_per_side();
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(part.num_free(), part.num_free());
    for (int j = 1; j < n; ++j)
        for (int i = 1; i < n; ++i) {
            const int d = part.dof_of_node(mesh.node(i, j));
            a(d, d) = 4.0;
            const int nb[4][2] = {{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}};
            for (const auto& q : nb) {
                const int e = part.dof_of_node(mesh.node(q[0], q[1]));
                if (e >= 0) a(d, e) = -1.0;
            }
        }
    return a;
}

Eigen::MatrixXd schur(const nosas::SubdomainMatrices& sm)
{
    if (sm.a_ii.rows() == 0) return sm.a_gg;
    const Eigen::MatrixXd gi = dense(sm.a_gi), ii = dense(sm.a_ii);
    Eigen::MatrixXd s = sm.a_gg - gi * ii.ldlt().solve(gi.transpose());
    return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd rhs_matrix(const Eigen::MatrixXd& a_gg, const nosas::SubdomainDofs& dofs, nosas::CoarseKind kind)
{
    if (kind != nosas::CoarseKind::nosas_block && kind != nosas::CoarseKind::nosas_diagonal) return a_gg;
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(a_gg.rows(), a_gg.cols());
    for (Eigen::Index r = 0; r < a_gg.rows(); ++r)
        for (Eigen::Index c = 0; c < a_gg.cols(); ++c) {
            const bool keep = r == c || (kind == nosas::CoarseKind::nosas_block && dofs.place[r] == dofs.place[c]);
            if (keep) b(r, c) = a_gg(r, c);
        }
    return b;
}

Eigen::MatrixXd coarse_matrix(const nosas::StructuredMesh& mesh, const nosas::CoefficientField& coeffs,
                              const nosas::DofPartition& part, nosas::CoarseKind kind, double eta)
{
    Eigen::MatrixXd a0 = Eigen::MatrixXd::Zero(part.num_gamma(), part.num_gamma());
    for (int i = 0; i < part.num_subdomains(); ++i) {
        const auto& dofs = part.sub(i);
        const nosas::SubdomainMatrices sm = nosas::assemble_subdomain(mesh, coeffs, part, i);
        const Eigen::Index g = sm.a_gg.rows();
        if (g == 0) continue;
        const Eigen::MatrixXd b = rhs_matrix(sm.a_gg, dofs, kind);
        const Eig e = generalized(schur(sm), b);
        int k = 0;
        while (k < g && e.values[k] < eta) ++k;
        const Eigen::MatrixXd q = e.vectors.leftCols(k);
        Eigen::MatrixXd local;
        if (kind == nosas::CoarseKind::nosas_exact && sm.a_ii.rows() > 0) {
            const Eigen::MatrixXd gi = dense(sm.a_gi), ii = dense(sm.a_ii);
            const Eigen::MatrixXd p = -ii.ldlt().solve(gi.transpose() * q);
            const Eigen::MatrixXd pap = p.transpose() * ii * p;
            const Eigen::MatrixXd gp = gi * p;
            local = sm.a_gg - gp * pap.ldlt().solve(gp.transpose());
        } else {
            const Eigen::MatrixXd d = (1.0 - e.values.head(k).array()).matrix().asDiagonal();
            const Eigen::MatrixXd bq = b * q;
            const Eigen::MatrixXd qbq = q.transpose() * bq;
            local = b - bq * d * qbq.inverse() * bq.transpose();
        }
        for (Eigen::Index r = 0; r < g; ++r)
            for (Eigen::Index c = 0; c < g; ++c) a0(dofs.gamma[r], dofs.gamma[c]) += local(r, c);
    }
    return 0.5 * (a0 + a0.transpose());
}

Eigen::MatrixXd global_schur(const nosas::StructuredMesh& mesh, const nosas::CoefficientField& coeffs,
                             const nosas::DofPartition& part)
{
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(part.num_gamma(), part.num_gamma());
    for (int i = 0; i < part.num_subdomains(); ++i) {
        const auto& dofs = part.sub(i);
        const Eigen::MatrixXd si = schur(nosas::assemble_subdomain(mesh, coeffs, part, i));
        for (Eigen::Index r = 0; r < si.rows(); ++r)
            for (Eigen::Index c = 0; c < si.cols(); ++c) s(dofs.gamma[r], dofs.gamma[c]) += si(r, c);
    }
    return s;
}

Eigen::MatrixXd prolongation(const nosas::CoarseSpace& space, int num_free, int num_gamma)
{
    Eigen::MatrixXd p(num_free, num_gamma);
    for (int k = 0; k < num_gamma; ++k) p.col(k) = space.prolong(Eigen::VectorXd::Unit(num_gamma, k));
    return p;
}

nosas::CoefficientField lognormal(const nosas::StructuredMesh& mesh, std::uint32_t seed, double sigma)
{
    std::mt19937 rng(seed);
    std::lognormal_distribution<double> dist(0.0, sigma);
    const int n = mesh.cells_per_side();
    std::vector<double> cells(static_cast<std::size_t>(n) * n);
    for (double& v : cells) v = dist(rng);
    return nosas::field_from_cells(mesh, cells, "lognormal");
}

double rel_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b)
{
    const double scale = std::max({a.norm(), b.norm(), 1e-300});
    return (a - b).norm() / scale;
}

} // namespace oracle
