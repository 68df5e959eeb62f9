#include "doctest.h"
#include "helpers.hpp"

#include <cmath>

#include "infrared/birch.hpp"
#include "infrared/errors.hpp"
#include "infrared/metrics.hpp"

using namespace infrared;

namespace {

struct Blobs {
    DenseMatrix<double> points;
    std::vector<int> labels;
};

// k Gaussian blobs in [0,1]^d with well separated centres.
Blobs gaussian_blobs(std::mt19937_64& rng, int k, std::size_t per_blob, std::size_t d, double sigma,
                     const std::vector<std::vector<double>>& centres) {
    std::normal_distribution<double> noise(0.0, sigma);
    Blobs b{DenseMatrix<double>(k * per_blob, d), {}};
    for (std::size_t i = 0; i < k * per_blob; ++i) {
        const int c = static_cast<int>(i % k);
        b.labels.push_back(c);
        for (std::size_t j = 0; j < d; ++j) b.points(i, j) = centres[c][j] + noise(rng);
    }
    return b;
}

std::vector<std::vector<double>> corner_centres(std::size_t d) {
    std::vector<std::vector<double>> c(4, std::vector<double>(d, 0.2));
    for (std::size_t j = 0; j < d; ++j) {
        c[1][j] = j % 2 ? 0.8 : 0.2;
        c[2][j] = j % 2 ? 0.2 : 0.8;
        c[3][j] = 0.8;
    }
    return c;
}

DenseMatrix<double> rows(const DenseMatrix<double>& m, std::size_t lo, std::size_t hi) {
    std::vector<std::size_t> idx;
    for (std::size_t i = lo; i < hi; ++i) idx.push_back(i);
    return m.gather_rows(std::span<const std::size_t>(idx));
}

// Nearest centroid by direct distance, lowest index on ties.
std::vector<int> brute_force_predict(const DenseMatrix<double>& centroids, const DenseMatrix<double>& pts) {
    std::vector<int> out;
    for (std::size_t i = 0; i < pts.rows(); ++i) {
        int best = 0;
        double best_d = 1e300;
        for (std::size_t j = 0; j < centroids.rows(); ++j) {
            double s = 0;
            for (std::size_t c = 0; c < pts.cols(); ++c) s += (pts(i, c) - centroids(j, c)) * (pts(i, c) - centroids(j, c));
            if (s < best_d) {
                best_d = s;
                best = static_cast<int>(j);
            }
        }
        out.push_back(best);
    }
    return out;
}

}  // namespace

TEST_SUITE("birch") {

TEST_CASE("clustering feature arithmetic") {
    const std::vector<double> a{1.0, 2.0}, b{3.0, 6.0};
    auto cf = ClusteringFeature::from_point(std::span<const double>(a));
    cf += ClusteringFeature::from_point(std::span<const double>(b));
    CHECK(cf.n == 2);
    CHECK(cf.centroid() == std::vector<double>{2.0, 4.0});
    // radius^2 = mean squared distance to the centroid = (1 + 4 + 1 + 4) / 2
    CHECK(cf.radius_squared() == doctest::Approx(5.0));
}

TEST_CASE("two far clouds give two subclusters") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> noise(0.0, 0.01);
    DenseMatrix<double> pts(100, 3);
    for (std::size_t i = 0; i < 100; ++i) {
        for (std::size_t j = 0; j < 3; ++j) pts(i, j) = (i < 50 ? 0.0 : 10.0) + noise(rng);
    }
    const CFTree tree = CFTree::fit(pts, {0.5, 50});
    CHECK(tree.num_subclusters() == 2);
}

TEST_CASE("single point") {
    DenseMatrix<double> p(1, 3);
    p(0, 0) = 0.25;
    p(0, 1) = 0.5;
    p(0, 2) = 0.75;
    const CFTree tree = CFTree::fit(p, {});
    REQUIRE(tree.num_subclusters() == 1);
    const auto c = tree.subcluster_centroids();
    for (std::size_t j = 0; j < 3; ++j) CHECK(c(0, j) == p(0, j));
    CHECK(tree.predict(p) == std::vector<int>{0});
}

TEST_CASE("four Gaussians are recovered exactly") {
    std::mt19937_64 rng(2);
    const auto centres = corner_centres(8);
    const Blobs b = gaussian_blobs(rng, 4, 50, 8, 0.01, centres);
    const CFTree tree = CFTree::fit(b.points, {0.1, 50});
    CHECK(tree.num_subclusters() == 4);
    const auto pred = tree.predict(b.points);
    CHECK(ari(b.labels, pred) == 1.0);

    // fresh draws from the same blobs land in their generating cluster
    const Blobs fresh = gaussian_blobs(rng, 4, 250, 8, 0.01, centres);
    const auto fp = tree.predict(fresh.points);
    std::size_t hit = 0;
    for (std::size_t i = 0; i < fp.size(); ++i) hit += fp[i] == pred[static_cast<std::size_t>(fresh.labels[i])];
    CHECK(double(hit) / double(fp.size()) >= 0.99);
}

TEST_CASE("partial fit over disjoint far clusters adds subclusters") {
    std::mt19937_64 rng(3);
    std::normal_distribution<double> noise(0.0, 0.01);
    DenseMatrix<double> p1(60, 2), p2(60, 2);
    for (std::size_t i = 0; i < 60; ++i) {
        const double off = double(i % 3) * 5.0;
        for (std::size_t j = 0; j < 2; ++j) {
            p1(i, j) = off + noise(rng);
            p2(i, j) = 100.0 + off + noise(rng);
        }
    }
    const std::size_t a = CFTree::fit(p1, {0.5, 50}).num_subclusters();
    const std::size_t b = CFTree::fit(p2, {0.5, 50}).num_subclusters();
    CFTree tree = CFTree::fit(p1, {0.5, 50});
    tree.partial_fit(p2);
    CHECK(tree.num_subclusters() == a + b);
}

TEST_CASE("partial fit with no points leaves the tree unchanged") {
    std::mt19937_64 rng(4);
    const Blobs b = gaussian_blobs(rng, 4, 30, 4, 0.05, corner_centres(4));
    CFTree tree = CFTree::fit(b.points, {0.1, 5});
    const auto before = tree.subcluster_centroids();
    const auto stats = tree.stats();
    tree.partial_fit(DenseMatrix<double>(0, 4));
    CHECK(tree.subcluster_centroids() == before);
    CHECK(tree.stats().num_points == stats.num_points);
    CHECK(tree.stats().num_nodes == stats.num_nodes);
}

TEST_CASE("fit then partial fit equals a single fit in the same order") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int branching : {3, 7, 50}) {
        DenseMatrix<double> pts(2000, 6);
        for (double& x : pts.values()) x = u(rng);
        const CFTree whole = CFTree::fit(pts, {0.3, branching});
        CFTree split = CFTree::fit(rows(pts, 0, 700), {0.3, branching});
        split.partial_fit(rows(pts, 700, 1500));
        split.partial_fit(rows(pts, 1500, 2000));
        CHECK(split.subcluster_centroids() == whole.subcluster_centroids());
        const auto lf = whole.leaf_features(), ls = split.leaf_features();
        REQUIRE(lf.size() == ls.size());
        for (std::size_t i = 0; i < lf.size(); ++i) {
            CHECK(lf[i].n == ls[i].n);
            CHECK(lf[i].linear_sum == ls[i].linear_sum);
            CHECK(lf[i].squared_norm_sum == ls[i].squared_norm_sum);
        }
    }
}

TEST_CASE("CF sums and radius bound after 1e5 random insertions") {
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const std::size_t n = 100000, d = 8;
    DenseMatrix<float> pts(n, d);
    for (float& x : pts.values()) x = static_cast<float>(u(rng));
    const BirchConfig cfg{0.5, 20};
    CFTree tree(d, cfg);
    for (std::size_t lo = 0; lo < n; lo += 10000) {
        std::vector<std::size_t> idx;
        for (std::size_t i = lo; i < lo + 10000; ++i) idx.push_back(i);
        tree.partial_fit(pts.gather_rows(std::span<const std::size_t>(idx)));
    }
    CHECK(tree.check_invariants(1e-9) == "");

    const auto root = tree.root_feature();
    CHECK(root.n == static_cast<std::int64_t>(n));
    std::vector<double> sum(d, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) sum[j] += pts(i, j);
    }
    for (std::size_t j = 0; j < d; ++j) CHECK(root.linear_sum[j] == doctest::Approx(sum[j]).epsilon(1e-6));

    std::int64_t leaf_points = 0;
    for (const auto& cf : tree.leaf_features()) {
        leaf_points += cf.n;
        CHECK(cf.radius_squared() <= cfg.threshold * cfg.threshold * (1 + 1e-9));
    }
    CHECK(leaf_points == static_cast<std::int64_t>(n));
    CHECK(tree.stats().depth >= 2);
}

TEST_CASE("predict: exact centroid and tie-break") {
    DenseMatrix<double> p(2, 1);
    p(0, 0) = 0.0;
    p(1, 0) = 1.0;
    const CFTree tree = CFTree::fit(p, {0.1, 50});
    REQUIRE(tree.num_subclusters() == 2);
    CHECK(tree.predict(p) == std::vector<int>{0, 1});
    DenseMatrix<double> mid(1, 1);
    mid(0, 0) = 0.5;
    CHECK(tree.predict(mid) == std::vector<int>{0});
}

TEST_CASE("predict equals brute-force nearest centroid and is pure") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    DenseMatrix<double> pts(3000, 16);
    for (double& x : pts.values()) x = u(rng);
    const CFTree tree = CFTree::fit(pts, {0.9, 10});
    REQUIRE(tree.num_subclusters() > 20);
    const auto before = tree.stats();
    const auto c = tree.subcluster_centroids();
    DenseMatrix<double> queries(1000, 16);
    for (double& x : queries.values()) x = u(rng);
    const auto pred = tree.predict(queries);
    CHECK(pred == brute_force_predict(c, queries));
    CHECK(tree.predict(queries) == pred);
    CHECK(tree.subcluster_centroids() == c);
    CHECK(tree.stats().num_nodes == before.num_nodes);
}

TEST_CASE("errors") {
    const CFTree empty(3, {});
    CHECK_THROWS_AS(empty.predict(DenseMatrix<double>(1, 3)), StateError);
    CFTree tree(3, {});
    CHECK_THROWS_AS(tree.partial_fit(DenseMatrix<double>(2, 4)), InputError);
    DenseMatrix<double> bad(1, 3, 0.0);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS(tree.partial_fit(bad), InputError);
    CHECK_THROWS_AS(CFTree(3, {0.0, 50}), InputError);
    CHECK_THROWS_AS(CFTree(3, {0.5, 1}), InputError);
    CHECK_THROWS_AS(CFTree::fit(DenseMatrix<double>(0, 3), {}), InputError);
}

}  // TEST_SUITE
