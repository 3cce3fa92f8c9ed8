#include <random>

#include "doctest.h"
#include "nosas/errors.hpp"
#include "nosas/partition.hpp"

using namespace nosas;

TEST_SUITE("partition")
{
    TEST_CASE("2 x 2 subdomains of 2 x 2 cells")
    {
        const StructuredMesh m(2, 2);
        const DofPartition p(m);
        CHECK(p.num_subdomains() == 4);
        CHECK(p.num_free() == 9);
        CHECK(p.num_gamma() == 5);
        for (const auto& s : p.subs()) {
            CHECK(s.gamma.size() == 3);
            CHECK(s.interior.size() == 1);
            CHECK_FALSE(s.floating);
            CHECK(s.boundary_nodes == 8);
        }
        CHECK(p.multiplicity(p.dof_of_node(m.node(2, 2))) == 4);
    }

    TEST_CASE("single subdomain has no interface")
    {
        const DofPartition p(StructuredMesh(1, 4));
        CHECK(p.num_gamma() == 0);
        CHECK(p.num_free() == 9);
        CHECK(p.sub(0).interior.size() == 9);
        const Eigen::VectorXd v = Eigen::VectorXd::Ones(9);
        CHECK(gather(p, 0, v, Block::gamma).size() == 0);
    }

    TEST_CASE("floating subdomains see 4m interface nodes")
    {
        const DofPartition p(StructuredMesh(4, 8));
        int floating = 0;
        for (const auto& s : p.subs()) {
            if (!s.floating) continue;
            ++floating;
            CHECK(s.gamma.size() == 32);
            int corners = 0, bottom = 0;
            for (auto pl : s.place) {
                if (pl >= BoundaryPlace::corner_ll) ++corners;
                if (pl == BoundaryPlace::bottom) ++bottom;
            }
            CHECK(corners == 4);
            CHECK(bottom == 7);
        }
        CHECK(floating == 4);
    }

    TEST_CASE("interface first, then interiors by subdomain")
    {
        const DofPartition p(StructuredMesh(3, 4));
        int next = p.num_gamma();
        for (const auto& s : p.subs())
            for (int d : s.interior) CHECK(d == next++);
        CHECK(next == p.num_free());
        for (int d = 0; d < p.num_free(); ++d) CHECK(p.dof_of_node(p.node_of_dof(d)) == d);
    }

    TEST_CASE("scatter of gathers gives multiplicity weights")
    {
        const DofPartition p(StructuredMesh(3, 4));
        std::mt19937 rng(7);
        std::normal_distribution<double> nd;
        Eigen::VectorXd v(p.num_free());
        for (auto& x : v) x = nd(rng);
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(p.num_free());
        for (int i = 0; i < p.num_subdomains(); ++i) {
            scatter_add(p, i, gather(p, i, v, Block::gamma), Block::gamma, sum);
            scatter_add(p, i, gather(p, i, v, Block::interior), Block::interior, sum);
        }
        for (int d = 0; d < p.num_free(); ++d) {
            const double w = d < p.num_gamma() ? p.multiplicity(d) : 1.0;
            CHECK(sum[d] == doctest::Approx(w * v[d]).epsilon(1e-14));
        }
    }

    TEST_CASE("round trip of an interior basis vector")
    {
        const DofPartition p(StructuredMesh(2, 4));
        const int d = p.sub(3).interior[2];
        const Eigen::VectorXd e = Eigen::VectorXd::Unit(p.num_free(), d);
        Eigen::VectorXd back = Eigen::VectorXd::Zero(p.num_free());
        scatter_add(p, 3, gather(p, 3, e, Block::interior), Block::interior, back);
        CHECK(back == e);
    }

    TEST_CASE("shape errors")
    {
        const DofPartition p(StructuredMesh(2, 4));
        Eigen::VectorXd g = Eigen::VectorXd::Zero(p.num_free());
        CHECK_THROWS_AS(gather(p, 0, Eigen::VectorXd::Zero(3), Block::gamma), ShapeError);
        CHECK_THROWS_AS(scatter_add(p, 0, Eigen::VectorXd::Zero(1), Block::interior, g), ShapeError);
    }
}
