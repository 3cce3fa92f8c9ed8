#include "nosas/experiment.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "nosas/errors.hpp"
#include "nosas/linalg.hpp"
#include "nosas/parallel.hpp"

namespace nosas {

namespace {

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

} // namespace

void ExperimentConfig::validate() const
{
    if (subdomains < 1) throw InvalidParameter("subdomains must be >= 1");
    if (cells < 1) throw InvalidParameter("cells must be >= 1");
    if (!(rtol > 0.0 && rtol < 1.0)) throw InvalidParameter("rtol must lie in (0, 1)");
    if (max_iter < 1) throw InvalidParameter("max_iter must be >= 1");
    if (!(coarse.c > 0.0)) throw InvalidParameter("c must be positive");
    if (threads < 0) throw InvalidParameter("threads must be >= 0");
}

ExperimentReport run_experiment(const ExperimentConfig& config)
{
    config.validate();
    ExperimentReport rep;
    rep.config = config;
    const Stopwatch total;

    Stopwatch sw;
    const StructuredMesh mesh(config.subdomains, config.cells);
    const CoefficientField coeffs = generate_coefficients(mesh, config.pattern);
    const DofPartition part(mesh);
    const GlobalSystem sys = assemble_global(mesh, coeffs, part);
    rep.timings.assembly = sw.seconds();
    rep.dofs = part.num_free();
    rep.interface_dofs = part.num_gamma();
    if (config.verify && rep.dofs > verify_mode_limit)
        throw InvalidParameter("verify mode needs at most " + std::to_string(verify_mode_limit) + " unknowns, got " +
                               std::to_string(rep.dofs));

    sw = Stopwatch();
    const Preconditioner prec = build_preconditioner(sys, mesh, coeffs, part, config.coarse, config.threads);
    rep.timings.setup = sw.seconds();

    const CoarseSpace& cs = prec.coarse();
    rep.eta = cs.eta();
    rep.coarse_dim = cs.dimension();
    for (const auto& b : cs.bases()) {
        rep.kept.push_back(b.kept);
        if (config.spectra) rep.spectra.emplace_back(b.eigenvalues.data(), b.eigenvalues.data() + b.eigenvalues.size());
    }
    if (is_nosas(config.coarse.kind)) rep.lambda_min_eta = smallest_excluded_eigenvalue(cs);
    rep.theoretical_upper = theoretical_bound(config.coarse.kind, rep.lambda_min_eta);

    sw = Stopwatch();
    const LinearMap op = [&](const Eigen::VectorXd& x) { return Eigen::VectorXd(sys.a * x); };
    const PcgResult res = pcg(op, prec.as_map(), sys.b, config.rtol, config.max_iter);
    rep.timings.pcg = sw.seconds();
    rep.iterations = res.report.iterations;
    rep.converged = res.report.converged;
    rep.final_residual = res.report.residuals.back();
    rep.cond_estimate = res.report.cond_estimate;
    rep.lambda_min_estimate = res.report.lambda_min;
    rep.lambda_max_estimate = res.report.lambda_max;

    if (config.verify) {
        sw = Stopwatch();
        const SpectrumBounds sb = preconditioned_extremes(sys.a, prec.as_map());
        rep.verify_lambda_min = sb.lambda_min;
        rep.verify_lambda_max = sb.lambda_max;
        rep.verify_cond = sb.cond();
        rep.timings.verify = sw.seconds();
    }
    rep.timings.total = total.seconds();
    return rep;
}

std::string subdomain_class(const SubdomainDofs& s, int S)
{
    if (S == 1) return "single";
    const bool bx = s.sx == 0 || s.sx == S - 1;
    const bool by = s.sy == 0 || s.sy == S - 1;
    if (bx && by) return "corner";
    if (bx || by) return "edge";
    return "floating";
}

std::string dump_spectrum(const ExperimentConfig& config, const std::string& selector)
{
    config.validate();
    const StructuredMesh mesh(config.subdomains, config.cells);
    const CoefficientField coeffs = generate_coefficients(mesh, config.pattern);
    const DofPartition part(mesh);
    const int N = part.num_subdomains();

    std::vector<int> chosen;
    if (selector == "classes" || selector.empty()) {
        for (const char* cls : {"corner", "edge", "floating", "single"}) {
            for (int i = 0; i < N; ++i) {
                if (subdomain_class(part.sub(i), mesh.subdomains_per_side()) == cls) {
                    chosen.push_back(i);
                    break;
                }
            }
        }
    } else {
        int idx = -1;
        try {
            std::size_t used = 0;
            idx = std::stoi(selector, &used);
            if (used != selector.size()) idx = -1;
        } catch (const std::exception&) {
            idx = -1;
        }
        if (idx < 0 || idx >= N)
            throw InvalidParameter("subdomain selector '" + selector + "' out of range [0, " + std::to_string(N) + ")");
        chosen.push_back(idx);
    }

    std::ostringstream out;
    out << "subdomain,class,variant,index,lambda,log10_lambda\n";
    out << std::setprecision(10);
    for (int i : chosen) {
        const SubdomainMatrices sm = assemble_subdomain(mesh, coeffs, part, i);
        if (sm.a_gg.rows() == 0) continue;
        const Eigen::MatrixXd s = dense_schur(sm);
        const std::string cls = subdomain_class(part.sub(i), mesh.subdomains_per_side());
        for (CoarseKind kind : {CoarseKind::nosas_exact, CoarseKind::nosas_block, CoarseKind::nosas_diagonal}) {
            const EigenPairs ep = generalized_symmetric_eigen(s, interface_matrix(sm, part.sub(i), kind));
            const char* variant = kind == CoarseKind::nosas_exact ? "exact"
                                  : kind == CoarseKind::nosas_block ? "block"
                                                                    : "diagonal";
            for (Eigen::Index k = 0; k < ep.values.size(); ++k) {
                const double l = ep.values[k];
                out << i << ',' << cls << ',' << variant << ',' << k + 1 << ',' << l << ',';
                if (l > 0.0) out << std::log10(l);
                else out << "-inf";
                out << '\n';
            }
        }
    }
    return out.str();
}

std::vector<IslandReport> island_survey(const ExperimentConfig& config)
{
    config.validate();
    const StructuredMesh mesh(config.subdomains, config.cells);
    const CoefficientField coeffs = generate_coefficients(mesh, config.pattern);
    const DofPartition part(mesh);
    const double rho1 = coeffs.max(), rho2 = coeffs.min();
    const bool contrast = rho1 > rho2;
    const double cut = std::sqrt(rho1 * rho2);

    std::vector<IslandReport> out(part.num_subdomains());
    parallel_for(
        part.num_subdomains(),
        [&](int i) {
            IslandReport r = contrast ? find_islands(mesh, coeffs, part, i, cut) : IslandReport{};
            r.subdomain = i;
            r.floating = part.sub(i).floating;
            if (!contrast) r.predicted_small = r.floating ? 1 : 0;
            const SubdomainMatrices sm = assemble_subdomain(mesh, coeffs, part, i);
            if (contrast && sm.a_gg.rows() > 0) {
                const EigenPairs ep = generalized_symmetric_eigen(
                    dense_schur(sm), interface_matrix(sm, part.sub(i), CoarseKind::nosas_exact));
                r.observed_small = observed_small_count(ep.values, rho1, rho2);
            }
            out[i] = std::move(r);
        },
        config.threads);
    return out;
}

} // namespace nosas
