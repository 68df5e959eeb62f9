#include "doctest.h"
#include "helpers.hpp"

#include <set>

#include "infrared/errors.hpp"
#include "infrared/generator.hpp"
#include "infrared/metrics.hpp"

using namespace infrared;

namespace {

std::pair<long long, long long> within_between(const GeneratedGraph& gen) {
    long long within = 0, between = 0;
    for (auto [u, v] : gen.graph.edge_list()) {
        (gen.truth.labels[u] == gen.truth.labels[v] ? within : between)++;
    }
    return {within, between};
}

bool prefix_connected(const Graph& g, const SnowballStream& s, int upto) {
    std::vector<NodeId> nodes;
    for (int t = 0; t < upto; ++t) nodes.insert(nodes.end(), s.subsets[t].begin(), s.subsets[t].end());
    return g.induced_subgraph(nodes).is_connected();
}

}  // namespace

TEST_SUITE("generator") {

TEST_CASE("5K benchmark statistics") {
    SbmParams p;
    p.num_nodes = 5000;
    p.seed = 1;
    CHECK(p.resolved_blocks() == 19);
    const auto gen = generate_sbm(p);
    const Graph& g = gen.graph;
    CHECK(g.num_edges() >= 90000);
    CHECK(g.num_edges() <= 110000);
    const double avg = 2.0 * double(g.num_edges()) / g.num_nodes();
    CHECK(avg == doctest::Approx(40.0).epsilon(0.05));
    CHECK(g.is_connected());
    CHECK(gen.truth.labels.size() == static_cast<std::size_t>(g.num_nodes()));
    CHECK(gen.sampled_nodes >= g.num_nodes());
    CHECK(static_cast<int>(count_labels(gen.truth.labels)) == gen.truth.num_blocks);
    for (int b : gen.truth.labels) {
        CHECK(b >= 0);
        CHECK(b < gen.truth.num_blocks);
    }
}

TEST_CASE("single block") {
    SbmParams p;
    p.num_nodes = 100;
    p.num_blocks = 1;
    p.target_avg_degree = 10;
    const auto gen = generate_sbm(p);
    CHECK(gen.truth.num_blocks == 1);
    const std::vector<int> one(gen.truth.labels.size(), 0);
    CHECK(ari(gen.truth.labels, one) == 1.0);
}

TEST_CASE("within/between ratio on three blocks") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        SbmParams p;
        p.num_nodes = 300;
        p.num_blocks = 3;
        p.within_between_ratio = 2.5;
        p.target_avg_degree = 20;
        p.seed = seed;
        const auto gen = generate_sbm(p);
        auto [within, between] = within_between(gen);
        REQUIRE(between > 0);
        const double r = double(within) / double(between);
        CHECK_MESSAGE(r >= 2.0, "seed " << seed << " ratio " << r);
        CHECK_MESSAGE(r <= 3.0, "seed " << seed << " ratio " << r);
    }
}

TEST_CASE("reproducible under a seed") {
    SbmParams p;
    p.num_nodes = 2000;
    p.seed = 42;
    const auto a = generate_sbm(p);
    const auto b = generate_sbm(p);
    CHECK(a.graph.edge_list() == b.graph.edge_list());
    CHECK(a.truth.labels == b.truth.labels);
    p.seed = 43;
    CHECK(generate_sbm(p).graph.edge_list() != a.graph.edge_list());
}

TEST_CASE("parameter errors") {
    SbmParams p;
    p.num_nodes = 10;
    p.num_blocks = 11;
    CHECK_THROWS_AS(generate_sbm(p), InputError);
    p = SbmParams{};
    p.num_nodes = 0;
    CHECK_THROWS_AS(generate_sbm(p), InputError);
    p = SbmParams{};
    p.num_nodes = 50;
    p.target_avg_degree = 60;  // more edges than pairs
    CHECK_THROWS_AS(generate_sbm(p), InputError);
    p = SbmParams{};
    p.within_between_ratio = -1;
    CHECK_THROWS_AS(generate_sbm(p), InputError);
}

TEST_CASE("snowball with one step is the whole graph") {
    std::mt19937_64 rng(2);
    const Graph g = testutil::random_connected_graph(rng, 40, 0.1);
    const auto s = snowball_split(g, 1, 5);
    REQUIRE(s.steps() == 1);
    std::set<NodeId> seen(s.subsets[0].begin(), s.subsets[0].end());
    CHECK(seen.size() == 40);
}

TEST_CASE("snowball on a path") {
    std::vector<Edge> path;
    for (NodeId v = 0; v + 1 < 10; ++v) path.emplace_back(v, v + 1);
    const Graph g = Graph::from_edges(path, 10);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto s = snowball_split(g, 2, seed);
        REQUIRE(s.steps() == 2);
        CHECK(s.subsets[0].size() == 5);
        CHECK(s.subsets[1].size() == 5);
        CHECK(prefix_connected(g, s, 1));
    }
}

TEST_CASE("snowball batches are disjoint, balanced, nested-connected") {
    SbmParams p;
    p.num_nodes = 3000;
    p.seed = 3;
    const auto gen = generate_sbm(p);
    const auto s = snowball_split(gen.graph, 10, 9);
    std::set<NodeId> seen;
    const std::size_t n = static_cast<std::size_t>(gen.graph.num_nodes());
    for (int t = 0; t < s.steps(); ++t) {
        const auto& batch = s.subsets[t];
        CHECK(batch.size() + 1 >= n / 10);
        CHECK(batch.size() <= n / 10 + 1);
        for (NodeId v : batch) CHECK(seen.insert(v).second);
        CHECK(prefix_connected(gen.graph, s, t + 1));
    }
    CHECK(seen.size() == n);
    CHECK(snowball_split(gen.graph, 10, 9).subsets == s.subsets);
}

TEST_CASE("snowball errors") {
    const std::vector<Edge> e{{0, 1}};
    const Graph g = Graph::from_edges(e, 2);
    CHECK_THROWS_AS(snowball_split(g, 3, 1), InputError);
    CHECK_THROWS_AS(snowball_split(g, 0, 1), InputError);
}

}  // TEST_SUITE
