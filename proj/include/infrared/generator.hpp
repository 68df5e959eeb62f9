#pragma once

#include <cstdint>
#include <vector>

#include "infrared/graph.hpp"

namespace infrared {

/// Knobs of the planted-partition benchmark generator.
struct SbmParams {
    NodeId num_nodes = 5000;
    /// 0 selects floor(N^0.35), the block count rule of the Graph Challenge generator.
    NodeId num_blocks = 0;
    double block_size_heterogeneity = 3.0;
    double within_between_ratio = 2.5;
    double target_avg_degree = 40.0;
    /// Exponent of the truncated power law behind node weights; 0 gives a
    /// plain (degree-homogeneous) planted partition.
    double degree_exponent = 2.5;
    /// Upper/lower bound ratio of each power-law draw.
    double degree_spread = 10.0;
    std::uint64_t seed = 1;

    NodeId resolved_blocks() const;
    void validate() const;
};

struct TruthPartition {
    std::vector<int> labels;
    int num_blocks = 0;
};

struct GeneratedGraph {
    Graph graph;
    TruthPartition truth;
    /// Node count before restricting to the largest connected component.
    NodeId sampled_nodes = 0;
};

/// Degree-targeted planted partition (degree-corrected SBM).
///
/// Block sizes come from a Dirichlet draw with concentration 10 / heterogeneity.
/// Every node gets a weight (sum of two truncated power-law draws); a fraction ratio/(1+ratio) of the
/// N * avg_degree / 2 edges is placed inside blocks (block b's share
/// proportional to W_b^2, W_b its weight mass) and the rest between blocks,
/// endpoints drawn proportionally to weight. Edge counts are exact, so the sampler is
/// O(M) expected. Only the largest connected component is returned and
/// blocks left empty by that restriction are dropped.
GeneratedGraph generate_sbm(const SbmParams& p);

/// T disjoint batches covering V, produced by seeded BFS growth and cut into
/// near-equal chunks (sizes differ by at most one). Each cumulative prefix is
/// connected when g is connected.
struct SnowballStream {
    std::vector<std::vector<NodeId>> subsets;
    int steps() const { return static_cast<int>(subsets.size()); }
};

SnowballStream snowball_split(const Graph& g, int steps, std::uint64_t seed);

}  // namespace infrared
