#include <doctest.h>

#include "mhwalk/errors.hpp"
#include "mhwalk/samplers.hpp"
#include "oracles.hpp"

#include <atomic>
#include <cmath>
#include <numeric>

using namespace mhwalk;

namespace {

// Graph with one hub whose outgoing weights are given explicitly.
Graph weighted_hub(const std::vector<double>& weights) {
    std::vector<std::tuple<NodeId, NodeId, double>> edges;
    for (uint32_t i = 0; i < weights.size(); ++i) {
        edges.emplace_back(0, i + 1, weights[i]);
        edges.emplace_back(i + 1, 0, weights[i]);
    }
    return oracles::make_graph(static_cast<NodeId>(weights.size() + 1), std::move(edges), true);
}

WalkModel deepwalk_model(const Graph& g) {
    WalkModel m;
    m.kind = ModelKind::deepwalk;
    m.bind(g);
    return m;
}

} // namespace

TEST_CASE("exact high-weight init picks the maximal weight") {
    Graph g = weighted_hub({1, 1, 9});
    WalkModel m = deepwalk_model(g);
    Rng rng(1);
    InitStrategy strategy{.kind = InitStrategy::Kind::high_weight, .hw_sample_size = 32};
    auto last = mh_init(strategy, m, g, {0, kNoAffix}, rng);
    REQUIRE(last);
    CHECK(*last == 2);
}

TEST_CASE("high-weight ties break to the lowest index") {
    Graph g = weighted_hub({3, 3, 3, 1});
    WalkModel m = deepwalk_model(g);
    Rng rng(2);
    InitStrategy strategy{.kind = InitStrategy::Kind::high_weight};
    CHECK(*mh_init(strategy, m, g, {0, kNoAffix}, rng) == 0);
}

TEST_CASE("random init is uniform over positive-weight candidates") {
    Graph g = weighted_hub({1, 0, 1, 0, 1});
    WalkModel m = deepwalk_model(g);
    Rng rng(3);
    std::vector<uint64_t> counts(5, 0);
    for (int i = 0; i < 30000; ++i) {
        auto last = mh_init({}, m, g, {0, kNoAffix}, rng);
        REQUIRE(last);
        ++counts[*last];
    }
    CHECK(counts[1] == 0);
    CHECK(counts[3] == 0);
    for (uint32_t i : {0u, 2u, 4u}) {
        CHECK(std::abs(static_cast<double>(counts[i]) / 30000 - 1.0 / 3) < 0.02);
    }
}

TEST_CASE("init on all-zero weights signals a dead end") {
    Graph g = weighted_hub({0, 0});
    WalkModel m = deepwalk_model(g);
    Rng rng(4);
    for (auto kind : {InitStrategy::Kind::random, InitStrategy::Kind::high_weight,
                      InitStrategy::Kind::burn_in}) {
        InitStrategy strategy{.kind = kind};
        CHECK_FALSE(mh_init(strategy, m, g, {0, kNoAffix}, rng));
    }
}

TEST_CASE("burn-in init lands on a positive-weight candidate") {
    Graph g = weighted_hub({0, 2, 5, 0, 1});
    WalkModel m = deepwalk_model(g);
    Rng rng(5);
    InitStrategy strategy{.kind = InitStrategy::Kind::burn_in, .burn_in_steps = 100};
    for (int i = 0; i < 200; ++i) {
        auto last = mh_init(strategy, m, g, {0, kNoAffix}, rng);
        REQUIRE(last);
        CHECK(g.weight(0, *last) > 0);
    }
}

TEST_CASE("restricted support: init stays on matching candidates") {
    Graph g = weighted_hub({1, 1, 1, 1, 1});
    g.node_types = {0, 1, 0, 0, 1, 0}; // hub type 0; nodes 2 and 5 are... types of 1..5
    g.num_node_types = 2;
    WalkModel m;
    m.kind = ModelKind::metapath2vec;
    m.metapath = {0, 1};
    m.bind(g);
    const WalkerState state{0, 0}; // requires next type 1: neighbors 1 (idx 0) and 4 (idx 3)
    Rng rng(6);
    for (int i = 0; i < 500; ++i) {
        for (auto kind :
             {InitStrategy::Kind::random, InitStrategy::Kind::high_weight,
              InitStrategy::Kind::burn_in}) {
            InitStrategy strategy{.kind = kind};
            auto last = mh_init(strategy, m, g, state, rng);
            REQUIRE(last);
            CHECK((*last == 0 || *last == 3));
        }
    }
}

TEST_CASE("uniform weights accept every proposal") {
    Rng rng(7);
    auto weight = [](uint32_t) { return 1.0; };
    uint32_t last = 0;
    for (int i = 0; i < 10000; ++i) {
        bool accepted = false;
        last = mh_transition(last, 8, weight, rng, &accepted);
        CHECK(accepted);
    }
}

TEST_CASE("M-H chain frequencies converge to the normalized target") {
    std::vector<double> w{1, 2, 3};
    Rng rng(8);
    auto weight = [&](uint32_t i) { return w[i]; };
    uint32_t last = 0;
    std::vector<uint64_t> counts(3, 0);
    const uint64_t draws = 1000000;
    for (uint64_t i = 0; i < draws; ++i) {
        last = mh_transition(last, 3, weight, rng);
        ++counts[last];
    }
    for (uint32_t i = 0; i < 3; ++i) {
        CHECK(std::abs(static_cast<double>(counts[i]) / draws - w[i] / 6.0) < 0.01);
    }
}

TEST_CASE("zero-weight candidates are always rejected") {
    std::vector<double> w{0, 1};
    Rng rng(9);
    auto weight = [&](uint32_t i) { return w[i]; };
    uint32_t last = 1;
    for (int i = 0; i < 10000; ++i) {
        last = mh_transition(last, 2, weight, rng);
        CHECK(last == 1);
    }
}

TEST_CASE("chain correctness: KL against exact target") {
    Rng rng(10);
    for (uint32_t n : {4u, 16u, 64u}) {
        auto w = oracles::random_weights(n, rng);
        const auto target = oracles::normalize(w);
        auto weight = [&](uint32_t i) { return w[i]; };
        uint32_t last = rng.uniform_index(n);
        for (int burn = 0; burn < 1000; ++burn) last = mh_transition(last, n, weight, rng);
        std::vector<uint64_t> counts(n, 0);
        const uint64_t draws = 1000000;
        for (uint64_t i = 0; i < draws; ++i) {
            last = mh_transition(last, n, weight, rng);
            ++counts[last];
        }
        CHECK(oracles::kl_from_counts(counts, target, draws) < 0.005);
    }
}

TEST_CASE("detailed balance holds for the exact kernel") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const uint32_t n = 2 + rng.uniform_index(15);
        auto pi = oracles::normalize(oracles::random_weights(n, rng));
        auto kernel = oracles::mh_kernel(pi);
        for (uint32_t i = 0; i < n; ++i) {
            for (uint32_t j = 0; j < n; ++j) {
                if (i == j) continue;
                CHECK(std::abs(pi[i] * kernel[i][j] - pi[j] * kernel[j][i]) < 1e-12);
            }
        }
    }
}

TEST_CASE("alias table reconstruction is exact") {
    Rng rng(12);
    for (int trial = 0; trial < 50; ++trial) {
        const uint32_t n = 1 + rng.uniform_index(100);
        auto w = oracles::random_weights(n, rng);
        auto table = alias_build(w);
        auto decoded = table.decode();
        auto expected = oracles::normalize(w);
        for (uint32_t i = 0; i < n; ++i) {
            CHECK(std::abs(decoded[i] - expected[i]) < 1e-12);
        }
    }
}

TEST_CASE("alias and direct sampling frequencies") {
    Rng rng(13);
    std::vector<double> w{1, 2, 3};
    auto expected = oracles::normalize(w);
    auto table = alias_build(w);
    std::vector<uint64_t> alias_counts(3, 0), direct_counts(3, 0);
    const uint64_t draws = 100000;
    for (uint64_t i = 0; i < draws; ++i) {
        ++alias_counts[alias_sample(table, rng)];
        ++direct_counts[direct_sample(w, rng)];
    }
    for (uint32_t i = 0; i < 3; ++i) {
        CHECK(std::abs(static_cast<double>(alias_counts[i]) / draws - expected[i]) < 0.01);
        CHECK(std::abs(static_cast<double>(direct_counts[i]) / draws - expected[i]) < 0.01);
    }
}

TEST_CASE("all-zero weights are rejected") {
    std::vector<double> zeros{0, 0, 0};
    Rng rng(14);
    CHECK_THROWS_AS(alias_build(zeros), ValidationError);
    CHECK_THROWS_AS(direct_sample(zeros, rng), ValidationError);
}

TEST_CASE("rejection with target == proposal always accepts on trial 1") {
    Rng rng(15);
    std::vector<double> w{1, 2, 3, 4};
    auto table = alias_build(w);
    for (int i = 0; i < 1000; ++i) {
        auto res = rejection_sample(w, w, table, 1.0, rng);
        CHECK(res.trials == 1);
    }
}

TEST_CASE("rejection validates the envelope") {
    Rng rng(16);
    std::vector<double> proposal{1, 1};
    std::vector<double> target{1, 3};
    auto table = alias_build(proposal);
    CHECK_THROWS_AS(rejection_sample(target, proposal, table, 2.0, rng), ValidationError);
    CHECK_NOTHROW(rejection_sample(target, proposal, table, 3.0, rng));
}

TEST_CASE("alias, direct and rejection agree in distribution (chi-square)") {
    Rng rng(17);
    const double z999 = 3.0902; // z for significance 0.001
    for (int trial = 0; trial < 5; ++trial) {
        const uint32_t n = 2 + rng.uniform_index(99);
        auto w = oracles::random_weights(n, rng);
        auto expected = oracles::normalize(w);
        auto table = alias_build(w);
        auto proposal = oracles::random_weights(n, rng, 0.2);
        auto proposal_table = alias_build(proposal);
        double bound = 0;
        for (uint32_t i = 0; i < n; ++i) bound = std::max(bound, w[i] / proposal[i]);

        const uint64_t draws = 100000;
        std::vector<std::vector<uint64_t>> counts(3, std::vector<uint64_t>(n, 0));
        for (uint64_t i = 0; i < draws; ++i) {
            ++counts[0][alias_sample(table, rng)];
            ++counts[1][direct_sample(w, rng)];
            ++counts[2][rejection_sample(w, proposal, proposal_table, bound, rng).index];
        }
        const double critical = oracles::chi_square_quantile(n - 1, z999);
        for (int s = 0; s < 3; ++s) {
            CHECK(oracles::chi_square_stat(counts[s], expected, draws) < critical);
        }
    }
}

TEST_CASE("node2vec (1,1) rejection acceptance ratio is exactly 1") {
    Rng rng(18);
    Graph g = oracles::random_graph(50, 5.0, false, rng);
    WalkModel m;
    m.kind = ModelKind::node2vec;
    m.bind(g);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 0) continue;
        const WalkerState state{v, 0};
        std::vector<double> target(g.degree(v));
        for (uint32_t i = 0; i < g.degree(v); ++i) {
            target[i] = m.calculate_weight(g, state, {v, i});
        }
        auto proposal_table = alias_build(g.weights_of(v));
        for (int i = 0; i < 50; ++i) {
            CHECK(rejection_sample(target, g.weights_of(v), proposal_table, 1.0, rng).trials ==
                  1);
        }
    }
}

TEST_CASE("the Last slot is one machine word") {
    CHECK(sizeof(std::atomic<uint32_t>) == sizeof(uint32_t));
}
