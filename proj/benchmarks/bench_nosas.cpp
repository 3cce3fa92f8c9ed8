// Timings of the setup phases and of one preconditioner application on the
// inclusion-grid problem.

#include <benchmark/benchmark.h>

#include "nosas/assembly.hpp"
#include "nosas/coarse.hpp"
#include "nosas/linalg.hpp"
#include "nosas/mesh.hpp"
#include "nosas/partition.hpp"
#include "nosas/precond.hpp"

namespace {

struct Problem {
    nosas::StructuredMesh mesh;
    nosas::CoefficientField coeffs;
    nosas::DofPartition part;

    Problem(int S, int m)
        : mesh(S, m),
          coeffs(nosas::generate_coefficients(mesh, nosas::default_pattern(nosas::Pattern::inclusion_grid))),
          part(mesh)
    {
    }
};

void BM_AssembleGlobal(benchmark::State& state)
{
    const Problem p(4, static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(nosas::assemble_global(p.mesh, p.coeffs, p.part));
    state.counters["dofs"] = p.part.num_free();
}
BENCHMARK(BM_AssembleGlobal)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

// Dense Schur complement plus generalized eigensolve of one floating subdomain.
void BM_SchurEigen(benchmark::State& state)
{
    const Problem p(4, static_cast<int>(state.range(0)));
    const int sub = 5;
    const nosas::SubdomainMatrices sm = nosas::assemble_subdomain(p.mesh, p.coeffs, p.part, sub);
    const Eigen::MatrixXd b = nosas::interface_matrix(sm, p.part.sub(sub), nosas::CoarseKind::nosas_exact);
    for (auto _ : state) {
        const Eigen::MatrixXd s = nosas::dense_schur(sm);
        benchmark::DoNotOptimize(nosas::generalized_symmetric_eigen(s, b));
    }
    state.counters["interface"] = static_cast<double>(b.rows());
}
BENCHMARK(BM_SchurEigen)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BuildPreconditioner(benchmark::State& state)
{
    const Problem p(static_cast<int>(state.range(0)), 16);
    const nosas::GlobalSystem sys = nosas::assemble_global(p.mesh, p.coeffs, p.part);
    const auto kind = static_cast<nosas::CoarseKind>(state.range(1));
    for (auto _ : state)
        benchmark::DoNotOptimize(nosas::build_preconditioner(sys, p.mesh, p.coeffs, p.part, {kind, 0.25}, 1));
    state.SetLabel(nosas::to_string(kind));
}
BENCHMARK(BM_BuildPreconditioner)
    ->ArgsProduct({{4, 8}, {static_cast<int>(nosas::CoarseKind::nosas_exact),
                            static_cast<int>(nosas::CoarseKind::nosas_diagonal)}})
    ->Unit(benchmark::kMillisecond);

void BM_ApplyPreconditioner(benchmark::State& state)
{
    const Problem p(static_cast<int>(state.range(0)), 16);
    const nosas::GlobalSystem sys = nosas::assemble_global(p.mesh, p.coeffs, p.part);
    const nosas::Preconditioner prec =
        nosas::build_preconditioner(sys, p.mesh, p.coeffs, p.part, {nosas::CoarseKind::nosas_diagonal, 0.25}, 1);
    for (auto _ : state) benchmark::DoNotOptimize(prec.apply(sys.b));
    state.counters["coarse_dim"] = prec.coarse().dimension();
}
BENCHMARK(BM_ApplyPreconditioner)->Arg(4)->Arg(8)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
