#include <random>

#include "doctest.h"
#include "nosas/assembly.hpp"
#include "nosas/errors.hpp"
#include "oracles.hpp"

using namespace nosas;

namespace {

Eigen::VectorXd random_vector(int n, unsigned seed)
{
    std::mt19937 rng(seed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

} // namespace

TEST_SUITE("assembly")
{
    TEST_CASE("right triangle stiffness by hand")
    {
        for (double h : {1.0, 0.125}) {
            const Eigen::Matrix3d k = element_stiffness({Point{0, 0}, Point{h, 0}, Point{0, h}}, 1.0);
            Eigen::Matrix3d expect;
            expect << 2, -1, -1, -1, 1, 0, -1, 0, 1;
            CHECK(oracle::rel_diff(k, 0.5 * expect) < 1e-15);
        }
        const Eigen::Matrix3d lr = element_stiffness({Point{0, 0}, Point{1, 0}, Point{1, 1}}, 1.0);
        Eigen::Matrix3d expect;
        expect << 1, -1, 0, -1, 2, -1, 0, -1, 1;
        CHECK(oracle::rel_diff(lr, 0.5 * expect) < 1e-15);
    }

    TEST_CASE("stiffness is linear in rho and rejects degenerate triangles")
    {
        const std::array<Point, 3> t{Point{0.1, 0.2}, Point{0.7, 0.3}, Point{0.4, 0.9}};
        CHECK(oracle::rel_diff(element_stiffness(t, 2.0), 2.0 * element_stiffness(t, 1.0)) < 1e-15);
        CHECK_THROWS_AS(element_stiffness({Point{0, 0}, Point{1, 1}, Point{2, 2}}, 1.0), DegenerateGeometry);
    }

    TEST_CASE("one free dof")
    {
        const StructuredMesh m(1, 2);
        const DofPartition p(m);
        const GlobalSystem sys = assemble_global(m, generate_coefficients(m, default_pattern(Pattern::constant)), p);
        REQUIRE(sys.a.rows() == 1);
        CHECK(sys.a.coeff(0, 0) == doctest::Approx(4.0));
        CHECK(sys.b[0] == doctest::Approx(0.25));
        CHECK(sys.b[0] / sys.a.coeff(0, 0) == doctest::Approx(1.0 / 16));
    }

    TEST_CASE("constant rho gives the 5-point stencil")
    {
        const StructuredMesh m(3, 4);
        const DofPartition p(m);
        const GlobalSystem sys = assemble_global(m, generate_coefficients(m, default_pattern(Pattern::constant)), p);
        CHECK(oracle::rel_diff(oracle::dense(sys.a), oracle::five_point(m, p)) < 1e-14);
        for (int d = 0; d < p.num_free(); ++d) CHECK(sys.b[d] == doctest::Approx(m.h() * m.h()));
    }

    TEST_CASE("interior diagonal of a 2 x 2 subdomain is 4")
    {
        const StructuredMesh m(2, 2);
        const DofPartition p(m);
        const SubdomainMatrices sm =
            assemble_subdomain(m, generate_coefficients(m, default_pattern(Pattern::constant)), p, 0);
        CHECK(sm.a_ii.coeff(0, 0) == doctest::Approx(4.0));
    }

    TEST_CASE("global matrix is the sum of subdomain Neumann blocks")
    {
        const StructuredMesh m(3, 4);
        const DofPartition p(m);
        const CoefficientField f = oracle::lognormal(m, 3, 2.0);
        const GlobalSystem sys = assemble_global(m, f, p);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(p.num_free(), p.num_free());
        Eigen::VectorXd bsum = Eigen::VectorXd::Zero(p.num_free());
        for (int i = 0; i < p.num_subdomains(); ++i) {
            const auto& s = p.sub(i);
            const SubdomainMatrices sm = assemble_subdomain(m, f, p, i);
            const Eigen::MatrixXd nm = oracle::dense(sm.neumann());
            std::vector<int> ids(s.gamma.begin(), s.gamma.end());
            ids.insert(ids.end(), s.interior.begin(), s.interior.end());
            for (std::size_t r = 0; r < ids.size(); ++r)
                for (std::size_t c = 0; c < ids.size(); ++c) sum(ids[r], ids[c]) += nm(r, c);
            for (std::size_t r = 0; r < s.gamma.size(); ++r) bsum[s.gamma[r]] += sm.b_g[r];
            for (std::size_t r = 0; r < s.interior.size(); ++r) bsum[s.interior[r]] += sm.b_i[r];
        }
        const Eigen::MatrixXd a = oracle::dense(sys.a);
        CHECK(oracle::rel_diff(a, sum) < 1e-12);
        CHECK(oracle::rel_diff(sys.b, bsum) < 1e-12);
        CHECK((a - a.transpose()).norm() == 0.0);
    }

    TEST_CASE("Neumann matrix of a floating subdomain annihilates constants")
    {
        const StructuredMesh m(3, 4);
        const DofPartition p(m);
        const SubdomainMatrices sm =
            assemble_subdomain(m, generate_coefficients(m, default_pattern(Pattern::constant)), p, 4);
        REQUIRE(p.sub(4).floating);
        const SparseMatrix n = sm.neumann();
        const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n.rows());
        CHECK((n * ones).norm() <= 1e-12 * oracle::dense(n).norm());
    }

    TEST_CASE("scaling rho scales every block")
    {
        const StructuredMesh m(2, 4);
        const DofPartition p(m);
        CoefficientField f = oracle::lognormal(m, 5, 1.0);
        const SubdomainMatrices a = assemble_subdomain(m, f, p, 1);
        for (auto& r : f.rho) r *= 1e6;
        const SubdomainMatrices b = assemble_subdomain(m, f, p, 1);
        CHECK(oracle::rel_diff(b.a_gg, 1e6 * a.a_gg) < 1e-14);
        CHECK(oracle::rel_diff(oracle::dense(b.a_ii), 1e6 * oracle::dense(a.a_ii)) < 1e-14);
        CHECK(oracle::rel_diff(oracle::dense(b.a_gi), 1e6 * oracle::dense(a.a_gi)) < 1e-14);
        CHECK(oracle::rel_diff(b.b_i, a.b_i) == 0.0);
    }

    TEST_CASE("energy identity")
    {
        const StructuredMesh m(3, 4);
        const DofPartition p(m);
        const CoefficientField f = oracle::lognormal(m, 11, 3.0);
        const GlobalSystem sys = assemble_global(m, f, p);
        for (unsigned seed = 0; seed < 5; ++seed) {
            const Eigen::VectorXd u = random_vector(p.num_free(), seed);
            CHECK(u.dot(sys.a * u) == doctest::Approx(energy(m, f, p, u)).epsilon(1e-12));
        }
    }
}
