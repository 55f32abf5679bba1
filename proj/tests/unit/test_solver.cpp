// Gauss-Seidel systems, basis columns, potential vectors, reduced influence.

#include <gtest/gtest.h>

#include <random>

#include "support/dense_oracle.hpp"
#include "support/fixtures.hpp"

using namespace circuitflow;

namespace {

SparseSystem lower_2x2() {
    // [[1.2, 0], [-0.5, 1.2]]
    return SparseSystem({1.2, 1.2}, {0, 0, 1}, {{0, -0.5}});
}

SolverOptions tight() { return SolverOptions{1e-13, 10'000}; }

}  // namespace

TEST(GaussSeidel, ForwardSubstitution2x2) {
    std::vector<double> rhs{1.0, 0.5};
    auto r = gauss_seidel(lower_2x2(), rhs, {});
    EXPECT_NEAR(r.values[0], 0.8333, 1e-4);
    EXPECT_NEAR(r.values[1], 0.7639, 1e-4);
    EXPECT_NEAR(r.values[1], (0.5 + 0.5 / 1.2) / 1.2, 1e-12);
}

TEST(GaussSeidel, IdentityConvergesAfterOneChange) {
    SparseSystem id({1.0, 1.0, 1.0}, {0, 0, 0, 0}, {});
    std::vector<double> b{3.0, -2.0, 0.5};
    auto r = gauss_seidel(id, b, {});
    EXPECT_EQ(r.values, b);
    // first sweep sets x = b, second sweep observes zero change
    EXPECT_EQ(r.iterations, 2u);
}

TEST(GaussSeidel, ZeroRhsGivesZero) {
    std::vector<double> zero{0.0, 0.0};
    auto r = gauss_seidel(lower_2x2(), zero, {});
    EXPECT_EQ(r.values, zero);
    EXPECT_EQ(r.iterations, 1u);
}

TEST(GaussSeidel, RejectsNonDominantSystem) {
    SparseSystem s({1.0, 1.0}, {0, 1, 2}, {{1, -1.0}, {0, -1.0}});
    EXPECT_FALSE(s.strictly_dominant());
    std::vector<double> b{1.0, 1.0};
    EXPECT_THROW(gauss_seidel(s, b, {}), ContractViolation);
}

TEST(GaussSeidel, AcceptsColumnDominance) {
    // row 0 is not dominant (|-0.9| + |-0.9| > 1) but every column is
    SparseSystem s({1.0, 1.0, 1.0}, {0, 2, 2, 2}, {{1, -0.9}, {2, -0.9}});
    EXPECT_TRUE(s.strictly_dominant());
    std::vector<double> b{0.0, 1.0, 1.0};
    auto r = gauss_seidel(s, b, {});
    EXPECT_NEAR(r.values[0], 1.8, 1e-9);
}

TEST(GaussSeidel, RejectsNonFiniteRhsAndBadOptions) {
    std::vector<double> b{1.0, std::nan("")};
    EXPECT_THROW(gauss_seidel(lower_2x2(), b, {}), ContractViolation);
    std::vector<double> ok{1.0, 1.0};
    EXPECT_THROW(gauss_seidel(lower_2x2(), ok, SolverOptions{0.0, 10}), ValidationError);
    EXPECT_THROW(gauss_seidel(lower_2x2(), ok, SolverOptions{1e-9, 0}), ValidationError);
}

TEST(GaussSeidel, IterationCapRaisesWithResidual) {
    auto in = fixtures::g3c_instance();
    auto sys = transposed_circuit_system(*in.t, in.lambda);
    std::vector<double> e{1.0, 0.0, 0.0};
    try {
        gauss_seidel(sys, e, SolverOptions{1e-12, 3});
        FAIL();
    } catch (const NonConvergenceError& err) {
        EXPECT_EQ(err.iterations(), 3u);
        EXPECT_GT(err.residual(), 1e-12);
    }
}

TEST(BasisColumn, G3Columns) {
    auto in = fixtures::g3_instance();
    auto c1 = basis_column(*in.t, in.lambda, 0);
    EXPECT_NEAR(c1.values[0], 0.8333, 1e-4);
    EXPECT_NEAR(c1.values[1], 0.6944, 1e-4);
    EXPECT_NEAR(c1.values[2], 0.6366, 1e-4);
    auto c3 = basis_column(*in.t, in.lambda, 2);
    EXPECT_EQ(c3.values[0], 0.0);
    EXPECT_EQ(c3.values[1], 0.0);
    EXPECT_NEAR(c3.values[2], 0.8333, 1e-4);
    EXPECT_EQ(c3.node, 2u);
    EXPECT_GE(c1.iterations_used, 1u);
    EXPECT_THROW(basis_column(*in.t, in.lambda, 3), ValidationError);
}

TEST(BasisColumn, IsolatedNode) {
    std::vector<std::string> ids{"x"};
    auto in = fixtures::make_instance(InfluenceGraph::from_edges({}, true, ids));
    auto c = basis_column(*in.t, in.lambda, 0);
    EXPECT_NEAR(c.values[0], 1.0 / 1.2, 1e-12);
}

TEST(BasisColumn, DiagonalFloorAndNonnegativity) {
    std::mt19937_64 rng(17);
    for (int rep = 0; rep < 40; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 40);
        const SolverOptions opts;
        for (node_index i = 0; i < in.t->size(); i += 3) {
            auto c = basis_column(*in.t, in.lambda, i, opts);
            EXPECT_GE(c.values[i], 1.0 / (1.0 + in.lambda[i]) - opts.tolerance);
            for (double v : c.values) EXPECT_GE(v, 0.0);
        }
    }
}

TEST(BasisColumn, MatchesDenseInverse) {
    std::mt19937_64 rng(23);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 50);
        const auto p = oracle::basis(*in.t, in.lambda);
        for (node_index i = 0; i < in.t->size(); ++i) {
            auto c = basis_column(*in.t, in.lambda, i, tight());
            for (node_index j = 0; j < in.t->size(); ++j) ASSERT_NEAR(c.values[j], p(j, i), 1e-8);
        }
    }
}

TEST(BasisColumn, LargerDampingNeverIncreasesEntries) {
    std::mt19937_64 rng(29);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 30);
        std::vector<double> bigger(in.lambda.values().begin(), in.lambda.values().end());
        for (auto& l : bigger) l *= 1.5;
        DampingConfig more(bigger);
        for (node_index i = 0; i < in.t->size(); ++i) {
            auto a = basis_column(*in.t, in.lambda, i, tight());
            auto b = basis_column(*in.t, more, i, tight());
            for (node_index j = 0; j < in.t->size(); ++j) EXPECT_LE(b.values[j], a.values[j] + 1e-12);
        }
    }
}

TEST(PotentialVector, G3AllTargets) {
    auto in = fixtures::g3_instance();
    auto p = potential_vector(*in.t, in.lambda, NodeSet::all(3));
    EXPECT_NEAR(p.values[0], 2.1644, 1e-4);
    EXPECT_NEAR(p.values[1], 1.1806, 1e-4);
    EXPECT_NEAR(p.values[2], 0.8333, 1e-4);
}

TEST(PotentialVector, G3SingleTarget) {
    auto in = fixtures::g3_instance();
    auto p = potential_vector(*in.t, in.lambda, NodeSet{2});
    EXPECT_NEAR(p.values[0], 0.6366, 1e-4);
    EXPECT_NEAR(p.values[1], 0.3472, 1e-4);
    EXPECT_NEAR(p.values[2], 0.8333, 1e-4);
}

TEST(PotentialVector, EdgelessGraph) {
    std::vector<std::string> ids{"1", "2", "3", "4"};
    auto in = fixtures::make_instance(InfluenceGraph::from_edges({}, true, ids));
    auto p = potential_vector(*in.t, in.lambda, NodeSet::all(4));
    for (double v : p.values) EXPECT_NEAR(v, 1.0 / 1.2, 1e-12);
}

TEST(PotentialVector, EmptyTargetRejected) {
    auto in = fixtures::g3_instance();
    EXPECT_THROW(potential_vector(*in.t, in.lambda, NodeSet{}), ValidationError);
}

TEST(PotentialVector, MatchesDenseColumnSums) {
    std::mt19937_64 rng(31);
    for (int rep = 0; rep < 40; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 50);
        auto targets = fixtures::random_set(rng, in.t->size(), 20);
        auto p = potential_vector(*in.t, in.lambda, targets, tight());
        auto want = oracle::potential(*in.t, in.lambda, targets);
        for (node_index i = 0; i < in.t->size(); ++i) {
            ASSERT_NEAR(p.values[i], want[i], 1e-8);
            ASSERT_GE(p.values[i], 0.0);
        }
    }
}

TEST(ReducedInfluence, G3Examples) {
    auto in = fixtures::g3_instance();
    auto f1 = reduced_influence(*in.t, in.lambda, NodeSet{0});
    EXPECT_EQ(f1.values[0], 1.0);
    EXPECT_NEAR(f1.values[1], 0.8333, 1e-4);
    EXPECT_NEAR(f1.values[2], 0.7639, 1e-4);
    auto fall = reduced_influence(*in.t, in.lambda, NodeSet::all(3));
    EXPECT_EQ(fall.values, (std::vector<double>{1.0, 1.0, 1.0}));
    EXPECT_EQ(fall.total, 3.0);
    auto f12 = reduced_influence(*in.t, in.lambda, NodeSet{0, 1});
    EXPECT_NEAR(f12.values[2], 1.0 / 1.2, 1e-9);
    EXPECT_THROW(reduced_influence(*in.t, in.lambda, NodeSet{}), ValidationError);
}

TEST(ReducedInfluence, MatchesDenseOracle) {
    std::mt19937_64 rng(37);
    for (int rep = 0; rep < 60; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 50);
        auto seeds = fixtures::random_set(rng, in.t->size(), 8);
        auto f = reduced_influence(*in.t, in.lambda, seeds, tight());
        auto want = oracle::influence(*in.t, in.lambda, seeds);
        for (node_index i = 0; i < in.t->size(); ++i) {
            ASSERT_NEAR(f.values[i], want[i], 1e-8);
            ASSERT_GE(f.values[i], 0.0);
            ASSERT_LE(f.values[i], 1.0 + 1e-9);
        }
        EXPECT_EQ(f.total, ordered_sum(f.values));
    }
}
