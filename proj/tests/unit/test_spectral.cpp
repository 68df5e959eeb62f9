#include "doctest.h"
#include "helpers.hpp"

#include "infrared/errors.hpp"
#include "infrared/spectral.hpp"

using namespace infrared;
using namespace infrared::spectral;

namespace {

Graph complete_graph(NodeId n) {
    std::vector<Edge> e;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) e.emplace_back(u, v);
    }
    return Graph::from_edges(e, n);
}

double max_offset_from_one(const SpectrumReport& r) {
    double m = 0;
    for (double l : r.eigenvalues) m = std::max(m, std::abs(l - 1.0));
    return m;
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("single-edge Laplacians") {
    const std::vector<Edge> e{{0, 1}};
    const Graph g = Graph::from_edges(e, 2);
    const auto l0 = laplacian_tau(g, 0.0);
    CHECK(l0(0, 0) == doctest::Approx(1.0));
    CHECK(l0(0, 1) == doctest::Approx(-1.0));
    CHECK(l0(1, 0) == doctest::Approx(-1.0));
    CHECK(l0(1, 1) == doctest::Approx(1.0));

    const auto ln = laplacian_tau(g, -0.5, 0.001);
    CHECK(ln(0, 0) == doctest::Approx(1.0));
    CHECK(ln(0, 1) == doctest::Approx(-2.0));
}

TEST_CASE("triangle spectrum") {
    const auto r = spectrum(complete_graph(3), 0.0);
    REQUIRE(r.eigenvalues.size() == 3);
    CHECK(std::abs(r.eigenvalues[0]) < 1e-12);
    CHECK(r.eigenvalues[1] == doctest::Approx(1.5));
    CHECK(r.eigenvalues[2] == doctest::Approx(1.5));
}

TEST_CASE("gershgorin examples") {
    std::mt19937_64 rng(1);
    const Interval conventional = gershgorin_interval(testutil::random_connected_graph(rng, 20, 0.2), 0.0);
    CHECK(conventional.lo == doctest::Approx(0.0));
    CHECK(conventional.hi == doctest::Approx(2.0));

    const Graph k6 = complete_graph(6);  // every degree is 5
    const Interval pos = gershgorin_interval(k6, 5.0);
    CHECK(pos.lo == doctest::Approx(0.5));
    CHECK(pos.hi == doctest::Approx(1.5));
    const Interval neg = gershgorin_interval(k6, -3.0);
    CHECK(neg.lo == doctest::Approx(-1.5));
    CHECK(neg.hi == doctest::Approx(3.5));
}

TEST_CASE("karate club spectra") {
    const auto k = testutil::karate();
    const auto r0 = spectrum(k.graph, 0.0);
    CHECK(std::abs(r0.eigenvalues.front()) < 1e-9);
    for (double l : r0.eigenvalues) {
        CHECK(l >= -1e-9);
        CHECK(l <= 2.0 + 1e-9);
    }
    CHECK(r0.num_infrared == 0);

    const auto rn = spectrum(k.graph, -1.5);
    CHECK(rn.num_infrared >= 1);
    CHECK(rn.eigenvalues.front() < 0.0);

    const auto r10 = spectrum(k.graph, 10.0);
    double rmax = 0;
    for (NodeId d : k.graph.degrees()) rmax = std::max(rmax, double(d) / (d + 10.0));
    for (double l : r10.eigenvalues) {
        CHECK(l >= 1.0 - rmax - 1e-9);
        CHECK(l <= 1.0 + rmax + 1e-9);
    }
}

TEST_CASE("spread around 1 shrinks as tau grows") {
    const auto k = testutil::karate();
    double prev = 1e9;
    for (double tau : {0.0, 5.0, 10.0, 50.0}) {
        const double off = max_offset_from_one(spectrum(k.graph, tau));
        CHECK(off < prev);
        prev = off;
    }
}

TEST_CASE("eigenvalues respect the gershgorin interval on 100 random graphs") {
    std::mt19937_64 rng(77);
    bool saw_infrared = false;
    double worst_residual = 0;
    for (int trial = 0; trial < 100; ++trial) {
        const NodeId n = 3 + static_cast<NodeId>(rng() % 40);
        const Graph g = testutil::random_connected_graph(rng, n, 0.05 + 0.5 * double(rng() % 100) / 100.0);
        for (int t = -5; t <= 10; ++t) {
            const double tau = t;
            const auto r = spectrum(g, tau);
            worst_residual = std::max(worst_residual, max_eigen_residual(laplacian_tau(g, tau), r));
            if (tau >= 0) {
                CHECK(r.num_infrared == 0);
                for (double l : r.eigenvalues) {
                    REQUIRE(l >= -1e-8);
                    REQUIRE(l <= 2.0 + 1e-8);
                }
            } else {
                for (double l : r.eigenvalues) {
                    REQUIRE(r.gershgorin.contains(l, 1e-8 * std::max(1.0, std::abs(l))));
                }
                saw_infrared = saw_infrared || r.eigenvalues.front() < 0.0;
            }
        }
    }
    CHECK(saw_infrared);
    CHECK(worst_residual < 1e-8);
}

TEST_CASE("karate eigenvector signs") {
    const auto k = testutil::karate();
    const auto faction = testutil::karate_faction(k);
    const auto r = karate_sign_check(k.graph, faction);
    CHECK(r.zero_mode_single_sign);
    CHECK(r.low_mode_agreement >= 0.85);
    CHECK(r.low_mode_ari >= 0.7);
    // Highest-frequency mode: adjacent nodes 34 and 23 take opposite signs.
    CHECK(r.high_mode_node34 * r.high_mode_node23 < 0);
    CHECK(r.high_mode_node34 == doctest::Approx(0.473).epsilon(0.002));
    CHECK(r.high_mode_node23 == doctest::Approx(-0.231).epsilon(0.002));
    CHECK(r.high_mode_same_block_flips > 0);
}

TEST_CASE("size cap and wrong graphs") {
    std::vector<Edge> path;
    for (NodeId v = 0; v + 1 < kDenseNodeCap + 1; ++v) path.emplace_back(v, v + 1);
    const Graph big = Graph::from_edges(path, kDenseNodeCap + 1);
    CHECK_THROWS_AS(laplacian_tau(big, 0.0), InputError);
    CHECK_THROWS_AS(spectrum(big, 0.0), InputError);
    const Graph k6 = complete_graph(6);
    const std::vector<int> f(6, 0);
    CHECK_THROWS_AS(karate_sign_check(k6, f), InputError);
}

}  // TEST_SUITE
