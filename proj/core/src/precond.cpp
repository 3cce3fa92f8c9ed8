#include "nosas/precond.hpp"

#include <limits>

#include "nosas/errors.hpp"
#include "nosas/parallel.hpp"

namespace nosas {

Preconditioner::Preconditioner(std::shared_ptr<const DofPartition> part, std::shared_ptr<const LocalProblems> local,
                               std::shared_ptr<const CoarseSpace> coarse, int threads)
    : part_(std::move(part)), local_(std::move(local)), coarse_(std::move(coarse)), threads_(threads)
{
}

Eigen::VectorXd Preconditioner::apply(const Eigen::VectorXd& r) const
{
    const DofPartition& p = *part_;
    if (r.size() != p.num_free()) throw ShapeError("preconditioner: residual size mismatch");
    Eigen::VectorXd z = Eigen::VectorXd::Zero(p.num_free());
    if (p.num_gamma() > 0) z = coarse_->prolong(coarse_->solve(coarse_->restrict_residual(r)));
    // Interiors are disjoint, so each task writes its own entries.
    parallel_for(
        p.num_subdomains(),
        [&](int i) {
            const auto& s = p.sub(i);
            if (s.interior.empty()) return;
            const Eigen::VectorXd ri = gather(p, i, r, Block::interior);
            const Eigen::VectorXd xi = (*local_)[i].a_ii.solve(ri);
            for (std::size_t k = 0; k < s.interior.size(); ++k) z[s.interior[k]] += xi[static_cast<Eigen::Index>(k)];
        },
        threads_);
    return z;
}

LinearMap Preconditioner::as_map() const
{
    return [this](const Eigen::VectorXd& r) { return apply(r); };
}

Eigen::VectorXd apply(const Preconditioner& p, const Eigen::VectorXd& r) { return p.apply(r); }

Preconditioner build_preconditioner(const GlobalSystem& system, const StructuredMesh& mesh,
                                    const CoefficientField& coeffs, const DofPartition& part,
                                    const CoarseSpec& spec, int threads)
{
    if (system.a.rows() != part.num_free()) throw ShapeError("system does not match partition");
    auto part_ptr = std::make_shared<const DofPartition>(part);
    auto local = std::make_shared<const LocalProblems>(build_local_problems(mesh, coeffs, part, threads));
    const double eta = spec.kind == CoarseKind::harmonic ? 0.0 : threshold(spec, mesh);
    auto coarse = std::make_shared<const CoarseSpace>(part_ptr, local, spec, eta, threads);
    return Preconditioner(part_ptr, local, coarse, threads);
}

double smallest_excluded_eigenvalue(const CoarseSpace& space)
{
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& b : space.bases())
        if (auto v = b.first_excluded()) lo = std::min(lo, *v);
    return lo;
}

double theoretical_bound(CoarseKind kind, double lambda_min_eta)
{
    if (kind == CoarseKind::nosas_exact) {
        const double inv = std::isinf(lambda_min_eta) ? 0.0 : 3.0 / lambda_min_eta;
        return 2.0 * (2.0 + inv);
    }
    if (is_inexact(kind)) {
        const double inv = std::isinf(lambda_min_eta) ? 0.0 : 1.0 / lambda_min_eta;
        return 4.0 * (2.0 + 7.0 * std::max(1.0, inv));
    }
    if (kind == CoarseKind::harmonic) return 1.0;
    return 0.0;
}

BoundReport bound_report(const Preconditioner& p, const GlobalSystem& system, double rtol, int max_iter)
{
    BoundReport rep;
    rep.kind = p.kind();
    rep.lambda_min_eta = is_nosas(rep.kind) ? smallest_excluded_eigenvalue(p.coarse()) : 0.0;
    rep.theoretical_upper = theoretical_bound(rep.kind, rep.lambda_min_eta);
    rep.lambda_upper = rep.kind == CoarseKind::nosas_exact ? 2.0 : is_inexact(rep.kind) ? 4.0 : 0.0;
    const LinearMap op = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(system.a * x); };
    if (system.a.rows() <= verify_mode_limit) {
        const SpectrumBounds sb = preconditioned_extremes(system.a, p.as_map());
        rep.from_verify = true;
        rep.measured_lambda_min = sb.lambda_min;
        rep.measured_lambda_max = sb.lambda_max;
    } else {
        const PcgResult res = pcg(op, p.as_map(), system.b, rtol, max_iter);
        rep.measured_lambda_min = res.report.lambda_min;
        rep.measured_lambda_max = res.report.lambda_max;
    }
    rep.measured_cond = rep.measured_lambda_max / rep.measured_lambda_min;
    return rep;
}

} // namespace nosas
