#include "infrared/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <string>

#include "infrared/errors.hpp"
#include "infrared/metrics.hpp"
#include "random.hpp"

namespace infrared {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

PartitionResult static_partition(const Graph& g, const EmbedConfig& cfg, const BirchConfig& birch,
                                 EmbeddingMatrix* embeddings) {
    cfg.validate();
    birch.validate();
    PartitionResult result;
    const auto start = Clock::now();

    EmbeddingMatrix z = embed(g, cfg, &result.embed_report);
    result.timings.embed_seconds = seconds_since(start);

    const auto cluster_start = Clock::now();
    CFTree tree = CFTree::fit(z, birch);
    result.labels = tree.predict(z);
    result.timings.cluster_seconds = seconds_since(cluster_start);
    result.timings.total_seconds = seconds_since(start);

    result.tree = tree.stats();
    result.k = static_cast<int>(count_labels(result.labels));
    if (embeddings) *embeddings = std::move(z);
    return result;
}

StreamingPartitioner::StreamingPartitioner(const Graph& source, EmbedConfig cfg, BirchConfig birch,
                                           StreamOptions opts)
    : source_(source), cfg_(cfg), birch_(birch), opts_(opts),
      seen_(static_cast<std::size_t>(source.num_nodes()), 0) {
    cfg_.validate();
    birch_.validate();
}

StreamStep StreamingPartitioner::advance(std::span<const NodeId> batch) {
    if (batch.empty()) throw InputError("snowball batch is empty");
    const NodeId n = source_.num_nodes();
    for (NodeId v : batch) {
        if (v < 0 || v >= n) throw InputError("snowball node " + std::to_string(v) + " out of range");
        if (seen_[v]) throw InputError("snowball node " + std::to_string(v) + " appears in more than one batch");
        seen_[v] = 1;
    }
    ++step_;

    StreamStep out;
    out.step = step_;
    out.new_nodes = batch.size();

    // Cumulative node set in ascending source order; merging the topology is
    // outside both timed phases.
    std::vector<NodeId> new_sorted(batch.begin(), batch.end());
    std::sort(new_sorted.begin(), new_sorted.end());
    std::vector<NodeId> nodes;
    nodes.reserve(stored_nodes_.size() + batch.size());
    {
        std::vector<NodeId> previous(stored_nodes_);
        std::sort(previous.begin(), previous.end());
        std::merge(previous.begin(), previous.end(), new_sorted.begin(), new_sorted.end(), std::back_inserter(nodes));
    }
    cumulative_ = source_.induced_subgraph(nodes);

    PartitionResult& result = out.result;
    const auto start = Clock::now();

    // Re-embed the whole cumulative graph with fresh noise, keep only the rows
    // of the new nodes. Step 1 uses the configured seed so that a one-step
    // stream reproduces static_partition.
    EmbedConfig step_cfg = cfg_;
    if (step_ > 1) step_cfg.seed = detail::mix(cfg_.seed, static_cast<std::uint64_t>(step_));
    EmbeddingMatrix z = embed(cumulative_, step_cfg, &result.embed_report);
    std::vector<std::size_t> new_rows;
    new_rows.reserve(new_sorted.size());
    for (NodeId v : new_sorted) {
        new_rows.push_back(static_cast<std::size_t>(std::lower_bound(nodes.begin(), nodes.end(), v) - nodes.begin()));
    }
    EmbeddingMatrix fresh = z.gather_rows(std::span<const std::size_t>(new_rows));
    result.timings.embed_seconds = seconds_since(start);

    const auto cluster_start = Clock::now();
    if (!tree_) tree_.emplace(static_cast<std::size_t>(cfg_.dim), birch_);
    tree_->partial_fit(fresh);
    stored_.append_rows(fresh);
    stored_nodes_.insert(stored_nodes_.end(), new_sorted.begin(), new_sorted.end());

    std::vector<int> stored_labels;
    if (opts_.refresh_embeddings) {
        std::vector<std::size_t> rows(stored_nodes_.size());
        for (std::size_t k = 0; k < rows.size(); ++k) {
            rows[k] = static_cast<std::size_t>(
                std::lower_bound(nodes.begin(), nodes.end(), stored_nodes_[k]) - nodes.begin());
        }
        stored_labels = tree_->predict(z.gather_rows(std::span<const std::size_t>(rows)));
    } else {
        stored_labels = tree_->predict(stored_);
    }
    result.timings.cluster_seconds = seconds_since(cluster_start);
    result.timings.total_seconds = seconds_since(start);

    // Stored rows are in arrival order; report labels in cumulative (ascending) order.
    result.labels.assign(nodes.size(), 0);
    for (std::size_t k = 0; k < stored_nodes_.size(); ++k) {
        const auto pos = std::lower_bound(nodes.begin(), nodes.end(), stored_nodes_[k]) - nodes.begin();
        result.labels[static_cast<std::size_t>(pos)] = stored_labels[k];
    }
    result.tree = tree_->stats();
    result.k = static_cast<int>(count_labels(result.labels));
    out.cumulative_edges = cumulative_.num_edges();
    out.nodes = std::move(nodes);
    return out;
}

std::vector<StreamStep> streaming_partition(const SnowballStream& stream, const Graph& g, const EmbedConfig& cfg,
                                            const BirchConfig& birch, StreamOptions opts) {
    if (stream.steps() < 1) throw InputError("snowball stream has no steps");
    std::size_t covered = 0;
    for (const auto& s : stream.subsets) covered += s.size();
    if (covered != static_cast<std::size_t>(g.num_nodes())) {
        throw InputError("snowball batches cover " + std::to_string(covered) + " nodes, graph has " +
                         std::to_string(g.num_nodes()));
    }
    StreamingPartitioner partitioner(g, cfg, birch, opts);
    std::vector<StreamStep> steps;
    steps.reserve(stream.subsets.size());
    for (const auto& batch : stream.subsets) steps.push_back(partitioner.advance(batch));
    return steps;
}

std::vector<AblationRow> tau_ablation(const Graph& g, std::span<const int> truth, std::span<const double> taus,
                                      const EmbedConfig& cfg, const BirchConfig& birch) {
    if (taus.empty()) throw InputError("tau grid is empty");
    if (truth.size() != static_cast<std::size_t>(g.num_nodes())) throw InputError("truth length differs from graph");
    std::vector<AblationRow> rows;
    for (double tau : taus) {
        EmbedConfig run = cfg;
        run.tau = tau;
        const PartitionResult r = static_partition(g, run, birch);
        const PrecisionRecall prf = precision_recall_f1(truth, r.labels);
        rows.push_back({tau, prf.precision, prf.recall, prf.f1, ari(truth, r.labels), r.k, r.timings.total_seconds});
    }
    return rows;
}

}  // namespace infrared
