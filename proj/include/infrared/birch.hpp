#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "infrared/matrix.hpp"

namespace infrared {

/// (n, linear sum, sum of squared norms) summary of a point set.
struct ClusteringFeature {
    std::int64_t n = 0;
    std::vector<double> linear_sum;
    double squared_norm_sum = 0.0;

    explicit ClusteringFeature(std::size_t dim = 0) : linear_sum(dim, 0.0) {}

    template <typename T>
    static ClusteringFeature from_point(std::span<const T> x);

    ClusteringFeature& operator+=(const ClusteringFeature& other);
    std::vector<double> centroid() const;
    /// Mean squared distance to the centroid, clamped at zero.
    double radius_squared() const;
};

struct BirchConfig {
    double threshold = 0.5;
    int branching_factor = 50;

    void validate() const;
};

struct TreeStats {
    std::size_t num_subclusters = 0;
    std::size_t depth = 0;
    std::size_t num_nodes = 0;
    std::int64_t num_points = 0;
};

/// BIRCH clustering-feature tree.
///
/// Insertion descends to the closest entry (squared Euclidean on centroids,
/// lowest index on ties). A leaf entry absorbs the point if the merged radius
/// stays within the threshold, otherwise the point opens a new entry; nodes
/// holding more than B entries split around their farthest pair of entries.
/// No global clustering step follows: leaf entries, in leaf-chain order, are
/// the clusters, so K is whatever the data and threshold produce.
class CFTree {
public:
    CFTree(std::size_t dim, BirchConfig cfg);

    template <typename T>
    static CFTree fit(const DenseMatrix<T>& points, BirchConfig cfg);

    /// Inserts rows in order. Throws InputError on a dimension mismatch or
    /// non-finite values (the tree is left untouched in that case).
    template <typename T>
    void partial_fit(const DenseMatrix<T>& points);

    /// Nearest leaf-entry id per row, lowest id on ties. Throws StateError on an empty tree.
    template <typename T>
    std::vector<int> predict(const DenseMatrix<T>& points) const;

    std::size_t dim() const { return dim_; }
    const BirchConfig& config() const { return cfg_; }
    bool empty() const { return num_points_ == 0; }

    std::size_t num_subclusters() const;
    TreeStats stats() const;
    /// Sum of the root entries' features.
    ClusteringFeature root_feature() const;
    /// Leaf entries in label order.
    std::vector<ClusteringFeature> leaf_features() const;
    DenseMatrix<double> subcluster_centroids() const;

    /// Empty string when the structural invariants hold (entry counts,
    /// parent CF == sum of child CFs within `rel_tol`, leaf radius <= threshold,
    /// leaf chain covers every leaf), otherwise a description of the first violation.
    std::string check_invariants(double rel_tol = 1e-9) const;

private:
    struct Entry {
        ClusteringFeature cf;
        std::vector<double> centroid;
        double sq_norm = 0.0;
        int child = -1;

        void refresh();
    };

    struct Node {
        bool is_leaf = true;
        std::vector<Entry> entries;
        int prev_leaf = -1;
        int next_leaf = -1;
    };

    bool insert(int node, const Entry& point);
    std::pair<Entry, Entry> split(int node);
    std::size_t closest_entry(const Node& node, std::span<const double> x) const;
    int first_leaf() const;

    std::size_t dim_;
    BirchConfig cfg_;
    std::vector<Node> nodes_;
    int root_ = 0;
    std::int64_t num_points_ = 0;
};

}  // namespace infrared
