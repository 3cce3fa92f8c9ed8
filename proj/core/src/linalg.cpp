#include "nosas/linalg.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <cmath>

#include "nosas/errors.hpp"

namespace nosas {

SpdFactorization::SpdFactorization(const SparseMatrix& a) : n_(static_cast<int>(a.rows()))
{
    if (a.rows() != a.cols()) throw ShapeError("factor_spd: matrix is not square");
    if (n_ == 0) return;
    using Ldlt = Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>>;
    ldlt_ = std::make_shared<Ldlt>();
    ldlt_->compute(a);
    double scale = 0.0;
    for (int k = 0; k < n_; ++k) scale = std::max(scale, std::abs(a.coeff(k, k)));
    const auto& d = ldlt_->vectorD();
    const auto& pinv = ldlt_->permutationPinv().indices();
    for (int k = 0; k < n_; ++k) {
        if (!(d[k] > 1e-14 * scale)) {
            const long row = pinv[k];
            throw NotSpd("matrix is not positive definite: pivot " + std::to_string(d[k]) +
                             " at row " + std::to_string(row),
                         row);
        }
    }
    if (ldlt_->info() != Eigen::Success) throw NotSpd("sparse factorization failed", -1);
}

Eigen::VectorXd SpdFactorization::solve(const Eigen::VectorXd& rhs) const
{
    if (rhs.size() != n_) throw ShapeError("solve_spd: rhs size mismatch");
    if (n_ == 0) return Eigen::VectorXd();
    return ldlt_->solve(rhs);
}

Eigen::MatrixXd SpdFactorization::solve(const Eigen::MatrixXd& rhs) const
{
    if (rhs.rows() != n_) throw ShapeError("solve_spd: rhs size mismatch");
    if (n_ == 0) return Eigen::MatrixXd(0, rhs.cols());
    return ldlt_->solve(rhs);
}

SpdFactorization factor_spd(const SparseMatrix& a) { return SpdFactorization(a); }

Eigen::VectorXd solve_spd(const SpdFactorization& f, const Eigen::VectorXd& rhs) { return f.solve(rhs); }

Eigen::MatrixXd dense_schur(const SubdomainMatrices& sm, const SpdFactorization& a_ii)
{
    if (sm.a_ii.rows() == 0) return sm.a_gg;
    const Eigen::MatrixXd a_ig = Eigen::MatrixXd(sm.a_gi.transpose());
    const Eigen::MatrixXd x = a_ii.solve(a_ig);
    Eigen::MatrixXd s = sm.a_gg - sm.a_gi * x;
    return 0.5 * (s + s.transpose());
}

Eigen::MatrixXd dense_schur(const SubdomainMatrices& sm)
{
    if (sm.a_ii.rows() == 0) return sm.a_gg;
    return dense_schur(sm, factor_spd(sm.a_ii));
}

EigenPairs generalized_symmetric_eigen(const Eigen::MatrixXd& s, const Eigen::MatrixXd& b)
{
    if (s.rows() != s.cols() || b.rows() != b.cols() || s.rows() != b.rows())
        throw ShapeError("generalized eigenproblem: dimension mismatch");
    EigenPairs out;
    if (s.rows() == 0) return out;
    Eigen::LLT<Eigen::MatrixXd> llt(b);
    if (llt.info() != Eigen::Success) throw NotSpd("right-hand side matrix is not positive definite", -1);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> es(s, b, Eigen::ComputeEigenvectors | Eigen::Ax_lBx);
    if (es.info() != Eigen::Success) throw NumericalBreakdown("generalized eigensolver did not converge");
    out.values = es.eigenvalues();
    out.vectors = es.eigenvectors();
    const double tol = 1e-12 * out.values.cwiseAbs().maxCoeff();
    for (Eigen::Index k = 0; k < out.values.size(); ++k)
        if (std::abs(out.values[k]) <= tol) out.values[k] = 0.0;
    return out;
}

std::pair<double, double> lanczos_extremes(const std::vector<double>& alpha, const std::vector<double>& beta)
{
    const Eigen::Index k = static_cast<Eigen::Index>(alpha.size());
    if (k == 0) return {1.0, 1.0};
    Eigen::VectorXd diag(k), sub(std::max<Eigen::Index>(k - 1, 0));
    for (Eigen::Index j = 0; j < k; ++j) {
        diag[j] = 1.0 / alpha[j];
        if (j > 0) diag[j] += beta[j - 1] / alpha[j - 1];
        if (j + 1 < k) sub[j] = std::sqrt(beta[j]) / alpha[j];
    }
    if (k == 1) return {diag[0], diag[0]};
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    return {es.eigenvalues()[0], es.eigenvalues()[k - 1]};
}

PcgResult pcg(const LinearMap& apply_operator, const LinearMap& apply_preconditioner,
              const Eigen::VectorXd& b, double rtol, int max_iter)
{
    PcgResult res;
    PcgReport& rep = res.report;
    res.x = Eigen::VectorXd::Zero(b.size());
    const double bnorm = b.norm();
    if (!std::isfinite(bnorm)) throw Divergence("right-hand side is not finite");
    rep.residuals.push_back(1.0);
    if (bnorm == 0.0) {
        rep.converged = true;
        rep.lambda_min = rep.lambda_max = rep.cond_estimate = 1.0;
        return res;
    }
    Eigen::VectorXd r = b;
    Eigen::VectorXd z = apply_preconditioner(r);
    Eigen::VectorXd p = z;
    double rz = r.dot(z);
    for (int k = 0; k < max_iter; ++k) {
        const Eigen::VectorXd q = apply_operator(p);
        const double pq = p.dot(q);
        if (!std::isfinite(pq) || !std::isfinite(rz)) throw Divergence("non-finite value in PCG at iteration " + std::to_string(k + 1));
        if (pq <= 0.0 || rz <= 0.0)
            throw Divergence("PCG breakdown: operator or preconditioner not positive definite at iteration " +
                             std::to_string(k + 1));
        const double alpha = rz / pq;
        res.x += alpha * p;
        r -= alpha * q;
        rep.alpha.push_back(alpha);
        rep.iterations = k + 1;
        const double rel = r.norm() / bnorm;
        if (!std::isfinite(rel)) throw Divergence("non-finite residual in PCG");
        rep.residuals.push_back(rel);
        if (rel <= rtol) {
            rep.converged = true;
            break;
        }
        z = apply_preconditioner(r);
        const double rz_new = r.dot(z);
        const double beta = rz_new / rz;
        rep.beta.push_back(beta);
        p = z + beta * p;
        rz = rz_new;
    }
    const auto [lo, hi] = lanczos_extremes(rep.alpha, rep.beta);
    rep.lambda_min = lo;
    rep.lambda_max = hi;
    rep.cond_estimate = hi / lo;
    return res;
}

Eigen::VectorXd preconditioned_spectrum(const SparseMatrix& a, const LinearMap& apply_preconditioner)
{
    const Eigen::Index n = a.rows();
    if (n > verify_mode_limit)
        throw InvalidParameter("verify mode limited to " + std::to_string(verify_mode_limit) + " unknowns (got " +
                               std::to_string(n) + ")");
    if (n == 0) return Eigen::VectorXd();
    Eigen::MatrixXd minv(n, n);
    Eigen::VectorXd e = Eigen::VectorXd::Zero(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        e[j] = 1.0;
        minv.col(j) = apply_preconditioner(e);
        e[j] = 0.0;
    }
    minv = 0.5 * (minv + minv.transpose()).eval();
    Eigen::LLT<Eigen::MatrixXd> llt(minv);
    if (llt.info() != Eigen::Success) throw NotSpd("preconditioner is not positive definite", -1);
    const Eigen::MatrixXd l = llt.matrixL();
    const Eigen::MatrixXd c = l.transpose() * (Eigen::MatrixXd(a) * l);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (c + c.transpose()), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

SpectrumBounds preconditioned_extremes(const SparseMatrix& a, const LinearMap& apply_preconditioner)
{
    const Eigen::VectorXd ev = preconditioned_spectrum(a, apply_preconditioner);
    if (ev.size() == 0) return {1.0, 1.0};
    return {ev[0], ev[ev.size() - 1]};
}

} // namespace nosas
