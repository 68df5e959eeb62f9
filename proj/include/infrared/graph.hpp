#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace infrared {

using NodeId = std::int32_t;
using EdgeOffset = std::int64_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected, unweighted graph in compressed row form.
///
/// Both directions of every edge are stored, rows are sorted and contain no
/// self-loops or duplicates. `original_ids()` maps compact indices back to the
/// ids of the graph this one was extracted from (identity for built graphs).
class Graph {
public:
    Graph() = default;

    /// Canonicalizes an arbitrary edge list: drops self-loops, symmetrizes and
    /// deduplicates. Throws InputError on N == 0 or an out-of-range endpoint.
    static Graph from_edges(std::span<const Edge> edges, NodeId num_nodes);

    NodeId num_nodes() const { return static_cast<NodeId>(row_offsets_.empty() ? 0 : row_offsets_.size() - 1); }
    EdgeOffset num_edges() const { return static_cast<EdgeOffset>(col_indices_.size() / 2); }

    NodeId degree(NodeId v) const { return static_cast<NodeId>(row_offsets_[v + 1] - row_offsets_[v]); }
    std::span<const NodeId> neighbors(NodeId v) const {
        return {col_indices_.data() + row_offsets_[v], static_cast<std::size_t>(degree(v))};
    }
    bool has_edge(NodeId u, NodeId v) const;

    std::span<const EdgeOffset> row_offsets() const { return row_offsets_; }
    std::span<const NodeId> col_indices() const { return col_indices_; }
    std::span<const NodeId> original_ids() const { return original_ids_; }

    std::vector<NodeId> degrees() const;
    NodeId num_isolated() const;

    /// Each undirected edge once, as (u, v) with u < v.
    std::vector<Edge> edge_list() const;

    /// Component id per node (ids assigned in order of first node), and component count.
    std::pair<std::vector<NodeId>, NodeId> connected_components() const;
    bool is_connected() const { return connected_components().second <= 1; }

    /// Subgraph induced by `nodes` (order defines compact ids; duplicates are rejected).
    /// Original ids compose through nested extractions.
    Graph induced_subgraph(std::span<const NodeId> nodes) const;

    /// Relabels node v as perm[v]. perm must be a permutation of [0, N).
    Graph permuted(std::span<const NodeId> perm) const;

private:
    std::vector<EdgeOffset> row_offsets_;
    std::vector<NodeId> col_indices_;
    std::vector<NodeId> original_ids_;
};

inline constexpr double kDefaultEpsilon = 0.001;

/// Diagonal of the corrected degree matrix and its inverse square root.
///
/// tau >= 0: value = deg + tau.
/// tau <  0: value = deg - min(|tau|, deg - epsilon), so value >= epsilon.
struct CorrectedDegrees {
    double tau = 0.0;
    double epsilon = kDefaultEpsilon;
    std::vector<double> values;
    std::vector<double> inv_sqrt;
};

/// Throws InputError if epsilon <= 0, or if tau < 0 and the graph has an
/// isolated node (the clamp would yield a non-positive degree).
CorrectedDegrees corrected_degrees(const Graph& g, double tau, double epsilon = kDefaultEpsilon);

}  // namespace infrared
