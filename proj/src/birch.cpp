#include "infrared/birch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "infrared/errors.hpp"

namespace infrared {

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) {
        const double diff = a[c] - b[c];
        s += diff * diff;
    }
    return s;
}

double squared_norm(std::span<const double> a) {
    double s = 0.0;
    for (double x : a) s += x * x;
    return s;
}

template <typename T>
void check_points(const DenseMatrix<T>& points, std::size_t dim) {
    if (points.rows() > 0 && points.cols() != dim) {
        throw InputError("points have " + std::to_string(points.cols()) + " columns, tree expects " +
                         std::to_string(dim));
    }
    for (T x : points.values()) {
        if (!std::isfinite(x)) throw InputError("non-finite value in points");
    }
}

}  // namespace

template <typename T>
ClusteringFeature ClusteringFeature::from_point(std::span<const T> x) {
    ClusteringFeature cf(x.size());
    cf.n = 1;
    for (std::size_t c = 0; c < x.size(); ++c) {
        cf.linear_sum[c] = static_cast<double>(x[c]);
        cf.squared_norm_sum += cf.linear_sum[c] * cf.linear_sum[c];
    }
    return cf;
}

ClusteringFeature& ClusteringFeature::operator+=(const ClusteringFeature& other) {
    if (linear_sum.empty()) linear_sum.assign(other.linear_sum.size(), 0.0);
    n += other.n;
    for (std::size_t c = 0; c < linear_sum.size(); ++c) linear_sum[c] += other.linear_sum[c];
    squared_norm_sum += other.squared_norm_sum;
    return *this;
}

std::vector<double> ClusteringFeature::centroid() const {
    std::vector<double> c(linear_sum);
    if (n > 0) {
        for (auto& x : c) x /= static_cast<double>(n);
    }
    return c;
}

double ClusteringFeature::radius_squared() const {
    if (n == 0) return 0.0;
    const double r2 = squared_norm_sum / static_cast<double>(n) - squared_norm(centroid());
    return std::max(r2, 0.0);
}

void BirchConfig::validate() const {
    if (!(threshold > 0.0) || !std::isfinite(threshold)) throw InputError("BIRCH threshold must be positive");
    if (branching_factor < 2) throw InputError("BIRCH branching factor must be at least 2");
}

void CFTree::Entry::refresh() {
    centroid = cf.centroid();
    sq_norm = squared_norm(centroid);
}

CFTree::CFTree(std::size_t dim, BirchConfig cfg) : dim_(dim), cfg_(cfg) {
    cfg_.validate();
    if (dim == 0) throw InputError("BIRCH needs at least one feature");
    nodes_.emplace_back();
}

template <typename T>
CFTree CFTree::fit(const DenseMatrix<T>& points, BirchConfig cfg) {
    if (points.rows() == 0) throw InputError("cannot fit BIRCH on zero points");
    CFTree tree(points.cols(), cfg);
    tree.partial_fit(points);
    return tree;
}

template <typename T>
void CFTree::partial_fit(const DenseMatrix<T>& points) {
    check_points(points, dim_);
    for (std::size_t i = 0; i < points.rows(); ++i) {
        Entry e;
        e.cf = ClusteringFeature::from_point(points.row(i));
        e.refresh();
        if (insert(root_, e)) {
            auto [left, right] = split(root_);
            Node root;
            root.is_leaf = false;
            root.entries.push_back(std::move(left));
            root.entries.push_back(std::move(right));
            nodes_.push_back(std::move(root));
            root_ = static_cast<int>(nodes_.size() - 1);
        }
        ++num_points_;
    }
}

std::size_t CFTree::closest_entry(const Node& node, std::span<const double> x) const {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < node.entries.size(); ++k) {
        const double d = squared_distance(node.entries[k].centroid, x);
        if (d < best_d) {
            best_d = d;
            best = k;
        }
    }
    return best;
}

bool CFTree::insert(int node_index, const Entry& point) {
    if (nodes_[node_index].entries.empty()) {
        nodes_[node_index].entries.push_back(point);
        return false;
    }
    const std::size_t ci = closest_entry(nodes_[node_index], point.centroid);
    const int child = nodes_[node_index].entries[ci].child;

    if (child >= 0) {
        const bool child_split = insert(child, point);
        // nodes_ may have grown during the recursion; re-fetch.
        Node& node = nodes_[node_index];
        if (!child_split) {
            node.entries[ci].cf += point.cf;
            node.entries[ci].refresh();
            return false;
        }
        auto [left, right] = split(child);
        Node& parent = nodes_[node_index];
        parent.entries[ci] = std::move(left);
        parent.entries.push_back(std::move(right));
        return static_cast<int>(parent.entries.size()) > cfg_.branching_factor;
    }

    Node& leaf = nodes_[node_index];
    Entry& closest = leaf.entries[ci];
    ClusteringFeature merged = closest.cf;
    merged += point.cf;
    const double inv_n = 1.0 / static_cast<double>(merged.n);
    double centroid_norm = 0.0;
    for (double s : merged.linear_sum) centroid_norm += (s * inv_n) * (s * inv_n);
    const double sq_radius = merged.squared_norm_sum * inv_n - centroid_norm;
    if (sq_radius <= cfg_.threshold * cfg_.threshold) {
        closest.cf = std::move(merged);
        closest.refresh();
        return false;
    }
    leaf.entries.push_back(point);
    return static_cast<int>(leaf.entries.size()) > cfg_.branching_factor;
}

std::pair<CFTree::Entry, CFTree::Entry> CFTree::split(int node_index) {
    std::vector<Entry> entries = std::move(nodes_[node_index].entries);
    const bool is_leaf = nodes_[node_index].is_leaf;
    const std::size_t m = entries.size();

    // Farthest pair, first in row-major order.
    std::vector<double> dist(m * m, 0.0);
    std::size_t far_a = 0, far_b = 0;
    double far_d = -1.0;
    for (std::size_t a = 0; a < m; ++a) {
        for (std::size_t b = 0; b < m; ++b) {
            const double d = a == b ? 0.0 : squared_distance(entries[a].centroid, entries[b].centroid);
            dist[a * m + b] = d;
            if (d > far_d) {
                far_d = d;
                far_a = a;
                far_b = b;
            }
        }
    }

    const int second = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    Node& first_node = nodes_[node_index];
    Node& second_node = nodes_[second];
    first_node.entries.clear();
    second_node.is_leaf = is_leaf;
    if (is_leaf) {
        second_node.prev_leaf = node_index;
        second_node.next_leaf = first_node.next_leaf;
        if (first_node.next_leaf >= 0) nodes_[first_node.next_leaf].prev_leaf = second;
        first_node.next_leaf = second;
    }

    Entry left, right;
    left.cf = ClusteringFeature(dim_);
    right.cf = ClusteringFeature(dim_);
    left.child = node_index;
    right.child = second;
    for (std::size_t k = 0; k < m; ++k) {
        const bool to_first = k == far_a || dist[far_a * m + k] < dist[far_b * m + k];
        if (to_first) {
            left.cf += entries[k].cf;
            first_node.entries.push_back(std::move(entries[k]));
        } else {
            right.cf += entries[k].cf;
            second_node.entries.push_back(std::move(entries[k]));
        }
    }
    left.refresh();
    right.refresh();
    return {std::move(left), std::move(right)};
}

int CFTree::first_leaf() const {
    // The first leaf is always node 0: splits keep the original node in place
    // and link the new sibling after it.
    return 0;
}

std::size_t CFTree::num_subclusters() const {
    std::size_t k = 0;
    for (int leaf = first_leaf(); leaf >= 0; leaf = nodes_[leaf].next_leaf) k += nodes_[leaf].entries.size();
    return k;
}

TreeStats CFTree::stats() const {
    TreeStats s;
    s.num_subclusters = num_subclusters();
    s.num_nodes = nodes_.size();
    s.num_points = num_points_;
    std::size_t depth = 1;
    for (int node = root_; !nodes_[node].is_leaf && !nodes_[node].entries.empty(); node = nodes_[node].entries[0].child)
        ++depth;
    s.depth = depth;
    return s;
}

ClusteringFeature CFTree::root_feature() const {
    ClusteringFeature total(dim_);
    for (const auto& e : nodes_[root_].entries) total += e.cf;
    return total;
}

std::vector<ClusteringFeature> CFTree::leaf_features() const {
    std::vector<ClusteringFeature> out;
    for (int leaf = first_leaf(); leaf >= 0; leaf = nodes_[leaf].next_leaf)
        for (const auto& e : nodes_[leaf].entries) out.push_back(e.cf);
    return out;
}

DenseMatrix<double> CFTree::subcluster_centroids() const {
    DenseMatrix<double> c(num_subclusters(), dim_);
    std::size_t k = 0;
    for (int leaf = first_leaf(); leaf >= 0; leaf = nodes_[leaf].next_leaf) {
        for (const auto& e : nodes_[leaf].entries) {
            std::copy(e.centroid.begin(), e.centroid.end(), c.row(k).begin());
            ++k;
        }
    }
    return c;
}

template <typename T>
std::vector<int> CFTree::predict(const DenseMatrix<T>& points) const {
    if (empty()) throw StateError("predict called on an empty CF-tree");
    check_points(points, dim_);
    using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
    const DenseMatrix<double> centroids = subcluster_centroids();
    const auto k = static_cast<Eigen::Index>(centroids.rows());
    const auto d = static_cast<Eigen::Index>(dim_);
    const Eigen::Map<const RowMatrix> c(centroids.data(), k, d);
    const Eigen::VectorXd c_norms = c.rowwise().squaredNorm();

    // ||x - c||^2 = ||x||^2 - 2 x.c + ||c||^2; the ||x||^2 term does not change
    // the argmin, so each block of rows needs one GEMM against the centroids.
    constexpr std::int64_t kBlock = 128;
    const auto n = static_cast<std::int64_t>(points.rows());
    const std::int64_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<int> labels(points.rows(), 0);
#pragma omp parallel
    {
        RowMatrix x;
        Eigen::MatrixXd dots;
#pragma omp for schedule(dynamic, 4)
        for (std::int64_t b = 0; b < blocks; ++b) {
            const std::int64_t lo = b * kBlock;
            const std::int64_t rows = std::min(kBlock, n - lo);
            x.resize(rows, d);
            for (std::int64_t i = 0; i < rows; ++i) {
                auto row = points.row(static_cast<std::size_t>(lo + i));
                for (Eigen::Index j = 0; j < d; ++j) x(i, j) = static_cast<double>(row[static_cast<std::size_t>(j)]);
            }
            dots.noalias() = c * x.transpose();  // k x rows, column per point
            for (std::int64_t i = 0; i < rows; ++i) {
                int best = 0;
                double best_score = std::numeric_limits<double>::infinity();
                const double* col = dots.col(i).data();
                for (Eigen::Index j = 0; j < k; ++j) {
                    const double score = c_norms[j] - 2.0 * col[j];
                    if (score < best_score) {
                        best_score = score;
                        best = static_cast<int>(j);
                    }
                }
                labels[static_cast<std::size_t>(lo + i)] = best;
            }
        }
    }
    return labels;
}

std::string CFTree::check_invariants(double rel_tol) const {
    auto close = [&](double a, double b) { return std::abs(a - b) <= rel_tol * std::max({1.0, std::abs(a), std::abs(b)}); };
    const double t2 = cfg_.threshold * cfg_.threshold;

    std::size_t leaf_depth = 0;
    std::size_t leaves_seen = 0;
    std::vector<std::pair<int, std::size_t>> stack{{root_, 1}};
    std::int64_t points = 0;
    while (!stack.empty()) {
        auto [idx, depth] = stack.back();
        stack.pop_back();
        const Node& node = nodes_[idx];
        if (static_cast<int>(node.entries.size()) > cfg_.branching_factor)
            return "node " + std::to_string(idx) + " has " + std::to_string(node.entries.size()) + " entries";
        if (node.is_leaf) {
            ++leaves_seen;
            if (leaf_depth == 0) leaf_depth = depth;
            if (depth != leaf_depth) return "leaves at different depths";
            for (const auto& e : node.entries) {
                if (e.cf.radius_squared() > t2 * (1.0 + rel_tol) + rel_tol)
                    return "leaf entry radius exceeds threshold in node " + std::to_string(idx);
                if (e.child >= 0) return "leaf entry with a child";
                points += e.cf.n;
            }
            continue;
        }
        for (const auto& e : node.entries) {
            if (e.child < 0) return "internal entry without a child";
            ClusteringFeature sum(dim_);
            for (const auto& ce : nodes_[e.child].entries) sum += ce.cf;
            if (sum.n != e.cf.n) return "entry count differs from its children in node " + std::to_string(idx);
            if (!close(sum.squared_norm_sum, e.cf.squared_norm_sum)) return "squared-norm sum mismatch";
            for (std::size_t c = 0; c < dim_; ++c)
                if (!close(sum.linear_sum[c], e.cf.linear_sum[c])) return "linear sum mismatch";
            stack.emplace_back(e.child, depth + 1);
        }
    }
    if (points != num_points_) return "leaf entries hold " + std::to_string(points) + " points, expected " + std::to_string(num_points_);

    std::size_t chained = 0;
    int prev = -1;
    for (int leaf = first_leaf(); leaf >= 0; leaf = nodes_[leaf].next_leaf) {
        if (!nodes_[leaf].is_leaf) return "leaf chain reaches an internal node";
        if (nodes_[leaf].prev_leaf != prev) return "broken prev link in the leaf chain";
        prev = leaf;
        if (++chained > nodes_.size()) return "cycle in the leaf chain";
    }
    if (chained != leaves_seen) return "leaf chain misses leaves";
    return {};
}

template ClusteringFeature ClusteringFeature::from_point(std::span<const float>);
template ClusteringFeature ClusteringFeature::from_point(std::span<const double>);
template CFTree CFTree::fit(const DenseMatrix<float>&, BirchConfig);
template CFTree CFTree::fit(const DenseMatrix<double>&, BirchConfig);
template void CFTree::partial_fit(const DenseMatrix<float>&);
template void CFTree::partial_fit(const DenseMatrix<double>&);
template std::vector<int> CFTree::predict(const DenseMatrix<float>&) const;
template std::vector<int> CFTree::predict(const DenseMatrix<double>&) const;

}  // namespace infrared
