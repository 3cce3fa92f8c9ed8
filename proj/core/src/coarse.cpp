#include "nosas/coarse.hpp"

#include <cmath>
#include <limits>

#include "nosas/errors.hpp"
#include "nosas/parallel.hpp"

namespace nosas {

std::string to_string(CoarseKind k)
{
    switch (k) {
    case CoarseKind::harmonic: return "harmonic";
    case CoarseKind::aas: return "aas";
    case CoarseKind::mes: return "mes";
    case CoarseKind::nosas_exact: return "nosas_exact";
    case CoarseKind::nosas_block: return "nosas_block";
    case CoarseKind::nosas_diagonal: return "nosas_diagonal";
    }
    return "?";
}

CoarseKind coarse_kind_from_string(const std::string& s)
{
    for (CoarseKind k : {CoarseKind::harmonic, CoarseKind::aas, CoarseKind::mes, CoarseKind::nosas_exact,
                         CoarseKind::nosas_block, CoarseKind::nosas_diagonal})
        if (to_string(k) == s) return k;
    if (s == "exact") return CoarseKind::nosas_exact;
    if (s == "block") return CoarseKind::nosas_block;
    if (s == "diagonal" || s == "diag") return CoarseKind::nosas_diagonal;
    throw InvalidParameter("unknown coarse kind '" + s + "'");
}

double threshold(const CoarseSpec& spec, const StructuredMesh& mesh)
{
    if (!(spec.c > 0.0)) throw InvalidParameter("threshold constant c must be positive");
    return spec.c * mesh.h() / mesh.H();
}

LocalProblems build_local_problems(const StructuredMesh& mesh, const CoefficientField& coeffs,
                                   const DofPartition& part, int threads)
{
    LocalProblems local(part.num_subdomains());
    parallel_for(
        part.num_subdomains(),
        [&](int i) {
            local[i].mats = assemble_subdomain(mesh, coeffs, part, i);
            try {
                local[i].a_ii = factor_spd(local[i].mats.a_ii);
            } catch (const NotSpd& e) {
                throw NotSpd("subdomain " + std::to_string(i) + ": " + e.what(), e.pivot());
            }
        },
        threads);
    return local;
}

Eigen::MatrixXd interface_matrix(const SubdomainMatrices& sm, const SubdomainDofs& dofs, CoarseKind kind)
{
    if (kind == CoarseKind::nosas_diagonal) return Eigen::MatrixXd(sm.a_gg.diagonal().asDiagonal());
    if (kind != CoarseKind::nosas_block) return sm.a_gg;
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(sm.a_gg.rows(), sm.a_gg.cols());
    for (Eigen::Index c = 0; c < out.cols(); ++c)
        for (Eigen::Index r = 0; r < out.rows(); ++r)
            if (dofs.place[r] == dofs.place[c]) out(r, c) = sm.a_gg(r, c);
    return out;
}

std::optional<double> SubdomainCoarse::first_excluded() const
{
    if (kept < eigenvalues.size()) return eigenvalues[kept];
    return std::nullopt;
}

Eigen::MatrixXd SubdomainCoarse::coarse_matrix() const
{
    if (rank() == 0) return a_hat;
    return a_hat - u * kinv.inverse() * u.transpose();
}

namespace {

Eigen::VectorXd interior_ones_weight(const SubdomainMatrices& sm, double& s)
{
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(sm.a_ii.rows());
    s = ones.dot(sm.a_ii * ones);
    return sm.a_gi * ones;
}

SubdomainCoarse empty_record(const SubdomainMatrices& sm)
{
    SubdomainCoarse rec;
    const Eigen::Index g = sm.a_gg.rows(), ni = sm.a_ii.rows();
    rec.a_hat = sm.a_gg;
    rec.u = Eigen::MatrixXd(g, 0);
    rec.kinv = Eigen::MatrixXd(0, 0);
    rec.ext_left = Eigen::MatrixXd(ni, 0);
    rec.ext_right = Eigen::MatrixXd(0, g);
    return rec;
}

} // namespace

SubdomainCoarse aas_basis(const SubdomainMatrices& sm, const SubdomainDofs& dofs)
{
    SubdomainCoarse rec = empty_record(sm);
    const Eigen::Index g = sm.a_gg.rows(), ni = sm.a_ii.rows();
    if (ni == 0 || g == 0) return rec;
    double s = 0.0;
    const Eigen::VectorXd w = interior_ones_weight(sm, s);
    const Eigen::VectorXd q = Eigen::VectorXd::Constant(g, 1.0 / dofs.boundary_nodes);
    rec.u.resize(g, 2);
    rec.u.col(0) = w;
    rec.u.col(1) = q;
    rec.kinv.resize(2, 2);
    rec.kinv << s, -1.0, -1.0, 0.0;
    rec.ext_left = Eigen::MatrixXd::Ones(ni, 1);
    rec.ext_right = q.transpose();
    rec.kept = 1;
    return rec;
}

SubdomainCoarse mes_basis(const SubdomainMatrices& sm, const SubdomainDofs&)
{
    SubdomainCoarse rec = empty_record(sm);
    const Eigen::Index g = sm.a_gg.rows(), ni = sm.a_ii.rows();
    if (ni == 0 || g == 0) return rec;
    double s = 0.0;
    const Eigen::VectorXd w = interior_ones_weight(sm, s);
    rec.u = w;
    rec.kinv = Eigen::MatrixXd::Constant(1, 1, s);
    rec.ext_left = Eigen::MatrixXd::Ones(ni, 1);
    rec.ext_right = -w.transpose() / s;
    rec.kept = 1;
    return rec;
}

SubdomainCoarse nosas_basis(const SubdomainMatrices& sm, const SpdFactorization& a_ii,
                            const SubdomainDofs& dofs, CoarseKind kind, double eta)
{
    if (!is_nosas(kind)) throw InvalidParameter("nosas_basis called with kind " + to_string(kind));
    SubdomainCoarse rec = empty_record(sm);
    const Eigen::Index g = sm.a_gg.rows();
    rec.a_hat = interface_matrix(sm, dofs, kind);
    if (g == 0) return rec;

    const Eigen::MatrixXd s = dense_schur(sm, a_ii);
    const EigenPairs pairs = generalized_symmetric_eigen(s, rec.a_hat);
    rec.eigenvalues = pairs.values;
    int k = 0;
    while (k < g && pairs.values[k] < eta) ++k;
    rec.kept = k;
    rec.degenerate = k == g;

    rec.q = pairs.vectors.leftCols(k);
    const Eigen::MatrixXd a_ig_q = sm.a_gi.transpose() * rec.q;
    rec.p = sm.a_ii.rows() > 0 ? Eigen::MatrixXd(-a_ii.solve(a_ig_q)) : Eigen::MatrixXd(0, k);
    rec.d = (1.0 - pairs.values.head(k).array()).matrix();
    const Eigen::MatrixXd aq = rec.a_hat * rec.q;
    rec.qaq = rec.q.transpose() * aq;
    rec.qaq = 0.5 * (rec.qaq + rec.qaq.transpose()).eval();

    rec.ext_left = rec.p;
    rec.ext_right = rec.qaq.ldlt().solve(aq.transpose());

    // Columns with 1 - lambda == 0 drop out of the coarse matrix.
    std::vector<int> active;
    for (int j = 0; j < k; ++j) {
        if (rec.d[j] < -1e-12)
            throw NumericalBreakdown("eigenvalue " + std::to_string(pairs.values[j]) +
                                     " > 1 kept below the threshold; reduce c");
        if (rec.d[j] > 1e-12) active.push_back(j);
    }
    const int r = static_cast<int>(active.size());
    rec.u.resize(g, r);
    Eigen::MatrixXd qaq_a(r, r);
    Eigen::VectorXd d_a(r);
    for (int a = 0; a < r; ++a) {
        rec.u.col(a) = aq.col(active[a]);
        d_a[a] = rec.d[active[a]];
        for (int b = 0; b < r; ++b) qaq_a(a, b) = rec.qaq(active[a], active[b]);
    }
    const Eigen::MatrixXd dinv = d_a.cwiseInverse().asDiagonal();
    rec.kinv = 0.5 * (qaq_a * dinv + dinv * qaq_a);
    return rec;
}

CoarseOperator::CoarseOperator(const std::vector<SubdomainCoarse>& bases, const DofPartition& part,
                               CoarseKind kind)
    : n_(part.num_gamma()), diagonal_(kind == CoarseKind::nosas_diagonal), spd_core_(kind != CoarseKind::aas)
{
    std::vector<Eigen::Triplet<double>> trip;
    int total_rank = 0;
    for (int i = 0; i < part.num_subdomains(); ++i) {
        const auto& gam = part.sub(i).gamma;
        const auto& a = bases[i].a_hat;
        for (Eigen::Index c = 0; c < a.cols(); ++c)
            for (Eigen::Index r = 0; r < a.rows(); ++r)
                if (a(r, c) != 0.0) trip.emplace_back(gam[r], gam[c], a(r, c));
        total_rank += bases[i].rank();
    }
    a_hat_.resize(n_, n_);
    a_hat_.setFromTriplets(trip.begin(), trip.end());
    if (n_ == 0) return;

    if (diagonal_) {
        inv_diag_ = a_hat_.diagonal();
        for (Eigen::Index k = 0; k < inv_diag_.size(); ++k) {
            if (!(inv_diag_[k] > 0.0)) throw NotSpd("interface diagonal is not positive", k);
            inv_diag_[k] = 1.0 / inv_diag_[k];
        }
    } else {
        hat_fact_ = factor_spd(a_hat_);
    }

    trip.clear();
    kinv_ = Eigen::MatrixXd::Zero(total_rank, total_rank);
    int col = 0;
    for (int i = 0; i < part.num_subdomains(); ++i) {
        const auto& gam = part.sub(i).gamma;
        const auto& b = bases[i];
        for (int j = 0; j < b.rank(); ++j)
            for (Eigen::Index r = 0; r < b.u.rows(); ++r)
                if (b.u(r, j) != 0.0) trip.emplace_back(gam[r], col + j, b.u(r, j));
        kinv_.block(col, col, b.rank(), b.rank()) = b.kinv;
        col += b.rank();
    }
    u_.resize(n_, total_rank);
    u_.setFromTriplets(trip.begin(), trip.end());
    if (total_rank == 0) return;

    const Eigen::MatrixXd u_dense(u_);
    hinv_u_ = diagonal_ ? Eigen::MatrixXd(inv_diag_.asDiagonal() * u_dense) : hat_fact_.solve(u_dense);
    Eigen::MatrixXd core = kinv_ - u_.transpose() * hinv_u_;
    core = 0.5 * (core + core.transpose()).eval();
    if (spd_core_) {
        core_llt_.compute(core);
        if (core_llt_.info() != Eigen::Success)
            throw NumericalBreakdown("Woodbury core matrix is not positive definite (threshold too aggressive?)");
    } else {
        core_lu_.compute(core);
        if (!(core_lu_.rcond() > 1e-15)) throw NumericalBreakdown("Woodbury core matrix is singular");
    }
}

Eigen::VectorXd CoarseOperator::solve_hat(const Eigen::VectorXd& r) const
{
    if (diagonal_) return inv_diag_.cwiseProduct(r);
    return hat_fact_.solve(r);
}

Eigen::VectorXd CoarseOperator::apply_inverse(const Eigen::VectorXd& r_gamma) const
{
    if (r_gamma.size() != n_) throw ShapeError("coarse solve: rhs size mismatch");
    if (n_ == 0) return Eigen::VectorXd();
    Eigen::VectorXd x = solve_hat(r_gamma);
    if (rank() == 0) return x;
    const Eigen::VectorXd t = u_.transpose() * x;
    const Eigen::VectorXd z = spd_core_ ? Eigen::VectorXd(core_llt_.solve(t)) : Eigen::VectorXd(core_lu_.solve(t));
    x += hinv_u_ * z;
    return x;
}

Eigen::MatrixXd CoarseOperator::dense_matrix() const
{
    Eigen::MatrixXd a(a_hat_);
    if (rank() == 0) return a;
    const Eigen::MatrixXd u(u_);
    return a - u * kinv_.inverse() * u.transpose();
}

CoarseOperator assemble_coarse(const std::vector<SubdomainCoarse>& bases, const DofPartition& part,
                               CoarseKind kind)
{
    if (kind == CoarseKind::harmonic) throw InvalidParameter("harmonic coarse space is not assembled by Woodbury");
    if (static_cast<int>(bases.size()) != part.num_subdomains()) throw ShapeError("one basis per subdomain expected");
    return CoarseOperator(bases, part, kind);
}

Eigen::VectorXd apply_coarse_inverse(const CoarseOperator& op, const Eigen::VectorXd& r_gamma)
{
    return op.apply_inverse(r_gamma);
}

CoarseSpace::CoarseSpace(std::shared_ptr<const DofPartition> part, std::shared_ptr<const LocalProblems> local,
                         CoarseSpec spec, double eta, int threads)
    : part_(std::move(part)), local_(std::move(local)), spec_(spec), eta_(eta)
{
    const DofPartition& p = *part_;
    const int N = p.num_subdomains();
    if (spec_.kind == CoarseKind::harmonic) {
        std::vector<Eigen::MatrixXd> schur(N);
        parallel_for(N, [&](int i) { schur[i] = dense_schur((*local_)[i].mats, (*local_)[i].a_ii); }, threads);
        std::vector<Eigen::Triplet<double>> trip;
        for (int i = 0; i < N; ++i) {
            const auto& gam = p.sub(i).gamma;
            for (Eigen::Index c = 0; c < schur[i].cols(); ++c)
                for (Eigen::Index r = 0; r < schur[i].rows(); ++r)
                    if (schur[i](r, c) != 0.0) trip.emplace_back(gam[r], gam[c], schur[i](r, c));
        }
        SparseMatrix s(p.num_gamma(), p.num_gamma());
        s.setFromTriplets(trip.begin(), trip.end());
        schur_fact_ = factor_spd(s);
        return;
    }
    bases_.resize(N);
    parallel_for(
        N,
        [&](int i) {
            const LocalProblem& lp = (*local_)[i];
            try {
                switch (spec_.kind) {
                case CoarseKind::aas: bases_[i] = aas_basis(lp.mats, p.sub(i)); break;
                case CoarseKind::mes: bases_[i] = mes_basis(lp.mats, p.sub(i)); break;
                default: bases_[i] = nosas_basis(lp.mats, lp.a_ii, p.sub(i), spec_.kind, eta_); break;
                }
            } catch (const NotSpd& e) {
                throw NotSpd("subdomain " + std::to_string(i) + ": " + e.what(), e.pivot());
            } catch (const NumericalBreakdown& e) {
                throw NumericalBreakdown("subdomain " + std::to_string(i) + ": " + e.what());
            }
        },
        threads);
    op_ = CoarseOperator(bases_, p, spec_.kind);
}

int CoarseSpace::dimension() const
{
    if (spec_.kind == CoarseKind::harmonic) return part_->num_gamma();
    int n = 0;
    for (const auto& b : bases_) n += b.kept;
    return n;
}

Eigen::VectorXd CoarseSpace::prolong(const Eigen::VectorXd& w_gamma) const
{
    const DofPartition& p = *part_;
    if (w_gamma.size() != p.num_gamma()) throw ShapeError("prolong: interface vector size mismatch");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(p.num_free());
    out.head(p.num_gamma()) = w_gamma;
    for (int i = 0; i < p.num_subdomains(); ++i) {
        const auto& s = p.sub(i);
        if (s.interior.empty()) continue;
        Eigen::VectorXd wi(static_cast<Eigen::Index>(s.gamma.size()));
        for (std::size_t k = 0; k < s.gamma.size(); ++k) wi[static_cast<Eigen::Index>(k)] = w_gamma[s.gamma[k]];
        Eigen::VectorXd vi;
        if (spec_.kind == CoarseKind::harmonic) {
            const LocalProblem& lp = (*local_)[i];
            vi = -lp.a_ii.solve(Eigen::VectorXd(lp.mats.a_gi.transpose() * wi));
        } else {
            const auto& b = bases_[i];
            vi = b.ext_left * (b.ext_right * wi);
        }
        for (std::size_t k = 0; k < s.interior.size(); ++k) out[s.interior[k]] = vi[static_cast<Eigen::Index>(k)];
    }
    return out;
}

Eigen::VectorXd CoarseSpace::restrict_residual(const Eigen::VectorXd& r) const
{
    const DofPartition& p = *part_;
    if (r.size() != p.num_free()) throw ShapeError("restrict: residual size mismatch");
    Eigen::VectorXd out = r.head(p.num_gamma());
    for (int i = 0; i < p.num_subdomains(); ++i) {
        const auto& s = p.sub(i);
        if (s.interior.empty()) continue;
        Eigen::VectorXd ri(static_cast<Eigen::Index>(s.interior.size()));
        for (std::size_t k = 0; k < s.interior.size(); ++k) ri[static_cast<Eigen::Index>(k)] = r[s.interior[k]];
        Eigen::VectorXd gi;
        if (spec_.kind == CoarseKind::harmonic) {
            const LocalProblem& lp = (*local_)[i];
            gi = -(lp.mats.a_gi * lp.a_ii.solve(ri));
        } else {
            const auto& b = bases_[i];
            gi = b.ext_right.transpose() * (b.ext_left.transpose() * ri);
        }
        for (std::size_t k = 0; k < s.gamma.size(); ++k) out[s.gamma[k]] += gi[static_cast<Eigen::Index>(k)];
    }
    return out;
}

Eigen::VectorXd CoarseSpace::solve(const Eigen::VectorXd& r_gamma) const
{
    if (spec_.kind == CoarseKind::harmonic) return schur_fact_.solve(r_gamma);
    return op_.apply_inverse(r_gamma);
}

Eigen::VectorXd coarse_prolong(const CoarseSpace& space, const Eigen::VectorXd& w_gamma)
{
    return space.prolong(w_gamma);
}

Eigen::VectorXd coarse_restrict(const CoarseSpace& space, const Eigen::VectorXd& r)
{
    return space.restrict_residual(r);
}

} // namespace nosas
