// Greedy seed selection and baselines.

#include <gtest/gtest.h>

#include <random>

#include "support/fixtures.hpp"

using namespace circuitflow;

namespace {

InfluenceEngine engine_for(const fixtures::Instance& in) { return InfluenceEngine(in.t, in.lambda); }

/// Evaluator over a fixed table of gains that depend only on |S|; counts calls.
struct TableEvaluator {
    std::vector<std::vector<double>> by_step;
    double initial_bound(node_index s) const { return by_step[0][s]; }
    double gain(const NodeSet& seeds, node_index s) const { return by_step[seeds.size()][s]; }
    void on_select(const NodeSet&, node_index, double) {}
};

}  // namespace

TEST(DeltaComplete, G3Examples) {
    auto in = fixtures::g3_instance();
    auto e = engine_for(in);
    const double f1 = e.total_influence(NodeSet{0});
    EXPECT_NEAR(delta_complete(e, NodeSet{0}, 1, f1), 0.2361, 1e-4);
    EXPECT_NEAR(delta_complete(e, NodeSet{0}, 2, f1), 0.2361, 1e-4);
    EXPECT_NEAR(delta_complete(e, NodeSet{}, 0, 0.0), 2.5972, 1e-4);
    EXPECT_THROW(delta_complete(e, NodeSet{0}, 0, f1), ValidationError);
}

TEST(DeltaFast, G3Examples) {
    auto in = fixtures::g3_instance();
    auto e = engine_for(in);
    const auto& p = e.potential_all();
    EXPECT_NEAR(delta_fast(NodeSet{}, 0, p, *in.t, in.lambda), 2.5972, 1e-4);
    EXPECT_NEAR(delta_fast(NodeSet{0}, 1, p, *in.t, in.lambda), 0.2361, 1e-4);
    EXPECT_NEAR(delta_fast(NodeSet{0}, 2, p, *in.t, in.lambda), 0.5833, 1e-4);
}

TEST(GreedySelect, CompleteOnG3) {
    auto in = fixtures::g3_instance();
    auto e = engine_for(in);
    CompleteEvaluator cc(e);
    auto sel = greedy_select(cc, 3, 2);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0, 1}));
    EXPECT_NEAR(sel.marginal_gains[0], 2.5972, 1e-4);
    EXPECT_NEAR(sel.marginal_gains[1], 0.2361, 1e-4);
    ASSERT_EQ(sel.step_elapsed_ms.size(), 2u);
}

TEST(GreedySelect, FastOnG3) {
    auto in = fixtures::g3_instance();
    auto e = engine_for(in);
    FastEvaluator cf(e);
    auto sel = greedy_select(cf, 3, 2);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0, 2}));
    EXPECT_NEAR(sel.marginal_gains[1], 0.5833, 1e-4);
}

TEST(GreedySelect, KEqualsNTakesEveryNode) {
    std::mt19937_64 rng(103);
    auto in = fixtures::random_instance(rng, 12, 12);
    auto e = engine_for(in);
    CompleteEvaluator cc(e);
    FastEvaluator cf(e);
    for (auto sel : {greedy_select(cc, 12, 12), greedy_select(cf, 12, 12)}) {
        auto sorted = sel.seeds;
        std::sort(sorted.begin(), sorted.end());
        EXPECT_EQ(NodeSet(sorted), NodeSet::all(12));
    }
}

TEST(GreedySelect, RejectsBadK) {
    auto in = fixtures::g3_instance();
    auto e = engine_for(in);
    FastEvaluator cf(e);
    EXPECT_THROW(greedy_select(cf, 3, 0), ValidationError);
    EXPECT_THROW(greedy_select(cf, 3, 4), ValidationError);
}

TEST(GreedySelect, TieBreaksToLowerId) {
    TableEvaluator t{{{1.0, 3.0, 3.0, 2.0}, {0.2, 0.0, 0.5, 0.5}}};
    auto pruned = greedy_select(t, 4, 2);
    EXPECT_EQ(pruned.seeds, (std::vector<node_index>{1, 2}));
    auto full = greedy_select(t, 4, 2, GreedyOptions{false});
    EXPECT_EQ(full.seeds, pruned.seeds);
    EXPECT_EQ(full.evaluations, 7u);
}

TEST(GreedySelect, NearTiesWithinEpsilonGoToLowerId) {
    TableEvaluator t{{{0.0, 0.0, 1.0 + 1e-12, 1.0}}};
    EXPECT_EQ(greedy_select(t, 4, 1).seeds, (std::vector<node_index>{2}));
    TableEvaluator u{{{0.0, 1.0, 0.5, 1.0 + 1e-12}}};
    EXPECT_EQ(greedy_select(u, 4, 1).seeds, (std::vector<node_index>{1}));
    EXPECT_EQ(greedy_select(u, 4, 1, GreedyOptions{false}).seeds, (std::vector<node_index>{1}));
}

TEST(GreedySelect, PruningMatchesExhaustiveOnRandomGraphs) {
    std::mt19937_64 rng(107);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = fixtures::random_instance(rng, 10, 100);
        const std::size_t n = in.t->size();
        const std::size_t k = std::min<std::size_t>(5, n);
        auto e = engine_for(in);
        CompleteEvaluator cc1(e), cc2(e);
        FastEvaluator cf1(e), cf2(e);
        auto a = greedy_select(cc1, n, k);
        auto b = greedy_select(cc2, n, k, GreedyOptions{false});
        EXPECT_EQ(a.seeds, b.seeds) << "cc rep " << rep;
        EXPECT_LE(a.evaluations, b.evaluations);
        auto c = greedy_select(cf1, n, k);
        auto d = greedy_select(cf2, n, k, GreedyOptions{false});
        EXPECT_EQ(c.seeds, d.seeds) << "cf rep " << rep;
        EXPECT_LE(c.evaluations, d.evaluations);
    }
}

TEST(GreedySelect, CompleteGainsNonIncreasing) {
    std::mt19937_64 rng(109);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = fixtures::random_instance(rng, 10, 60);
        auto e = engine_for(in);
        CompleteEvaluator cc(e);
        auto sel = greedy_select(cc, in.t->size(), std::min<std::size_t>(8, in.t->size()));
        for (std::size_t i = 1; i < sel.marginal_gains.size(); ++i)
            EXPECT_LE(sel.marginal_gains[i], sel.marginal_gains[i - 1] + 1e-9);
    }
}

TEST(GreedySelect, InitialBoundDominatesFirstGain) {
    std::mt19937_64 rng(113);
    for (int rep = 0; rep < 30; ++rep) {
        auto in = fixtures::random_instance(rng, 2, 40);
        auto e = engine_for(in);
        CompleteEvaluator cc(e);
        for (node_index s = 0; s < in.t->size(); ++s)
            EXPECT_LE(delta_complete(e, NodeSet{}, s, 0.0), cc.initial_bound(s) + 1e-8);
    }
}

TEST(GreedySelect, FastFirstSeedIsTopPagerank) {
    std::mt19937_64 rng(127);
    for (int rep = 0; rep < 20; ++rep) {
        auto in = fixtures::random_instance(rng, 5, 50);
        if (!in.lambda.is_uniform()) in.lambda = DampingConfig::uniform(in.t->size(), 0.2);
        auto e = engine_for(in);
        FastEvaluator cf(e);
        auto first = greedy_select(cf, in.t->size(), 1).seeds[0];
        auto pr = pagerank_topk(*in.t, in.lambda[0], 1, SolverOptions{1e-13, 10'000}).seeds[0];
        auto scores = pagerank_scores(*in.t, in.lambda[0], NodeSet::all(in.t->size()), SolverOptions{1e-13, 10'000});
        // equal unless two nodes tie to within solver noise
        if (first != pr) {
            EXPECT_NEAR(scores[first], scores[pr], 1e-9 * scores[pr]);
        }
    }
}

TEST(GreedySelect, DeterministicIncludingEvaluations) {
    std::mt19937_64 rng(131);
    auto in = fixtures::random_instance(rng, 60, 60);
    auto e1 = engine_for(in), e2 = engine_for(in);
    CompleteEvaluator a(e1), b(e2);
    auto x = greedy_select(a, 60, 5), y = greedy_select(b, 60, 5);
    EXPECT_EQ(x.seeds, y.seeds);
    EXPECT_EQ(x.marginal_gains, y.marginal_gains);
    EXPECT_EQ(x.evaluations, y.evaluations);
}

TEST(Pagerank, EdgelessGraph) {
    auto t = TransmissionMatrix::from_triplets(3, {});
    auto x = pagerank_scores(t, 0.2, NodeSet::all(3));
    const double d = 1.0 / 1.2;
    for (double v : x) EXPECT_NEAR(v, (1.0 - d) / 3.0, 1e-12);
    EXPECT_NEAR(x[0], 0.0556, 1e-4);
}

TEST(Pagerank, ProportionalToPotentialOnG3) {
    auto in = fixtures::g3_instance();
    auto x = pagerank_scores(*in.t, 0.2, NodeSet::all(3), SolverOptions{1e-13, 10'000});
    const std::vector<double> p{2.164351851851852, 1.180555555555556, 0.833333333333333};
    const double c = (x[0] + x[1] + x[2]) / (p[0] + p[1] + p[2]);
    for (int i = 0; i < 3; ++i) EXPECT_NEAR(x[i], c * p[i], 1e-6 * c * p[0]);
    EXPECT_NEAR(c, 0.2 / 3.0, 1e-12);
    EXPECT_EQ(pagerank_topk(*in.t, 0.2, 1).seeds, (std::vector<node_index>{0}));
}

TEST(Pagerank, Validation) {
    auto in = fixtures::g3_instance();
    EXPECT_THROW(pagerank_scores(*in.t, 0.2, NodeSet{}), ValidationError);
    EXPECT_THROW(pagerank_scores(*in.t, 0.0, NodeSet{0}), ValidationError);
}

TEST(Degree, G3AndStar) {
    auto g = fixtures::g3();
    EXPECT_EQ(degree_topk(g, 1).seeds, (std::vector<node_index>{0}));
    EXPECT_EQ(degree_topk(g, 3).seeds, (std::vector<node_index>{0, 1, 2}));
    auto star = fixtures::parse("c l1\nc l2\nc l3\nc l4\nc l5\n");
    EXPECT_EQ(star.id_of(degree_topk(star, 1).seeds[0]), "c");
    EXPECT_THROW(degree_topk(g, 0), ValidationError);
}

TEST(DegreeDiscount, G3Example) {
    auto g = fixtures::g3();
    auto sel = degree_discount_topk(g, 2, 0.01);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0, 1}));
    EXPECT_DOUBLE_EQ(sel.marginal_gains[1], -1.0);
    EXPECT_EQ(degree_discount_topk(g, 1, 0.7).seeds, (std::vector<node_index>{0}));
    EXPECT_THROW(degree_discount_topk(g, 1, 0.0), ValidationError);
}

TEST(DegreeDiscount, DiscountOfUnchosenNeighbour) {
    auto g = fixtures::parse("1 2\n1 3\n2 3\n4 5\n");
    auto sel = degree_discount_topk(g, 3, 0.01);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0, 3, 1}));
    auto sel2 = degree_discount_topk(fixtures::g3(), 3, 0.01);
    EXPECT_EQ(sel2.seeds, (std::vector<node_index>{0, 1, 2}));
    EXPECT_NEAR(sel2.marginal_gains[2], 0.0 - 2.0 * 2.0 - (0.0 - 2.0) * 2.0 * 0.01, 1e-12);
}

TEST(DegreeDiscount, EdgelessPicksLowestIds) {
    std::vector<std::string> ids{"1", "2", "3", "4"};
    auto g = InfluenceGraph::from_edges({}, true, ids);
    EXPECT_EQ(degree_discount_topk(g, 2, 0.01).seeds, (std::vector<node_index>{0, 1}));
}

TEST(CelfIc, G3SingleSeed) {
    auto in = fixtures::g3_instance();
    auto sel = celf_ic_select(*in.t, 1, 100'000, 7);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0}));
    EXPECT_NEAR(sel.marginal_gains[0], 2.75, 0.02);
}

TEST(CelfIc, G3SecondSeedCompletesNodeThree) {
    auto in = fixtures::g3_instance();
    auto sel = celf_ic_select(*in.t, 2, 100'000, 7);
    EXPECT_EQ(sel.seeds, (std::vector<node_index>{0, 2}));
    EXPECT_NEAR(sel.marginal_gains[1], 0.25, 0.02);
}

TEST(CelfIc, ExhaustionAndDeterminism) {
    std::mt19937_64 rng(137);
    auto in = fixtures::random_instance(rng, 15, 15);
    auto a = celf_ic_select(*in.t, 15, 200, 3);
    auto b = celf_ic_select(*in.t, 15, 200, 3);
    EXPECT_EQ(a.seeds, b.seeds);
    EXPECT_EQ(a.evaluations, b.evaluations);
    EXPECT_EQ(NodeSet(a.seeds), NodeSet::all(15));
    auto c = celf_ic_select(*in.t, 4, 300, 3, GreedyOptions{false});
    EXPECT_EQ(std::vector<node_index>(a.seeds.begin(), a.seeds.begin() + 4), c.seeds);
}
