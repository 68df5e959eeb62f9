#pragma once

#include <optional>
#include <span>
#include <vector>

#include "infrared/birch.hpp"
#include "infrared/embedder.hpp"
#include "infrared/generator.hpp"
#include "infrared/graph.hpp"

namespace infrared {

struct Timings {
    double embed_seconds = 0.0;
    double cluster_seconds = 0.0;
    double total_seconds = 0.0;
};

struct PartitionResult {
    /// Block id per node of the partitioned graph, in [0, k).
    std::vector<int> labels;
    int k = 0;
    Timings timings;
    TreeStats tree;
    EmbedReport embed_report;
};

/// Embed, fit BIRCH on the rows in node order, then predict every node.
/// Graph-level preconditions are checked by corrected_degrees (isolated nodes
/// are rejected for tau <= 0). When `embeddings` is given the final Z is copied there.
PartitionResult static_partition(const Graph& g, const EmbedConfig& cfg, const BirchConfig& birch,
                                 EmbeddingMatrix* embeddings = nullptr);

struct StreamOptions {
    /// Predict on the freshly computed embeddings of all cumulative nodes
    /// instead of the rows stored when each node arrived.
    bool refresh_embeddings = false;
};

/// One snowball step.
struct StreamStep {
    int step = 0;
    /// Original ids (in the source graph) of the cumulative node set, ascending.
    /// The cumulative graph uses this order, and so does result.labels.
    std::vector<NodeId> nodes;
    std::size_t new_nodes = 0;
    EdgeOffset cumulative_edges = 0;
    PartitionResult result;
};

/// Incremental partitioner over a source graph.
///
/// Step 1 is a static partition of the first batch. Every later step extracts
/// the cumulative induced subgraph, re-embeds it in one pass, inserts only the
/// rows of the new nodes into the existing CF-tree, appends those rows to the
/// stored embeddings and predicts all stored rows.
/// Noise is redrawn every step: step t > 1 embeds with seed mix(cfg.seed, t).
class StreamingPartitioner {
public:
    StreamingPartitioner(const Graph& source, EmbedConfig cfg, BirchConfig birch, StreamOptions opts = {});

    /// Throws InputError if a node is out of range or already seen.
    StreamStep advance(std::span<const NodeId> batch);

    int step() const { return step_; }
    const Graph& cumulative_graph() const { return cumulative_; }
    const EmbeddingMatrix& stored_embeddings() const { return stored_; }
    /// Source ids of the stored rows, in insertion order.
    std::span<const NodeId> stored_nodes() const { return stored_nodes_; }
    const std::optional<CFTree>& tree() const { return tree_; }

private:
    const Graph& source_;
    EmbedConfig cfg_;
    BirchConfig birch_;
    StreamOptions opts_;
    std::vector<char> seen_;
    std::vector<NodeId> stored_nodes_;
    Graph cumulative_;
    EmbeddingMatrix stored_;
    std::optional<CFTree> tree_;
    int step_ = 0;
};

/// Runs every batch of `stream`. Throws InputError unless the batches are
/// disjoint and cover the graph.
std::vector<StreamStep> streaming_partition(const SnowballStream& stream, const Graph& g, const EmbedConfig& cfg,
                                            const BirchConfig& birch, StreamOptions opts = {});

struct AblationRow {
    double tau = 0.0;
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    double ari = 0.0;
    int k = 0;
    double seconds = 0.0;
};

/// static_partition per tau with the same seed, scored against `truth`.
std::vector<AblationRow> tau_ablation(const Graph& g, std::span<const int> truth, std::span<const double> taus,
                                      const EmbedConfig& cfg, const BirchConfig& birch);

}  // namespace infrared
