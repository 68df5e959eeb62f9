#include "infrared/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "infrared/errors.hpp"

namespace infrared {

Graph Graph::from_edges(std::span<const Edge> edges, NodeId num_nodes) {
    if (num_nodes <= 0) throw InputError("graph must have at least one node");

    std::vector<EdgeOffset> counts(static_cast<std::size_t>(num_nodes) + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u < 0 || v < 0 || u >= num_nodes || v >= num_nodes) {
            throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range for " +
                             std::to_string(num_nodes) + " nodes");
        }
        if (u == v) continue;
        ++counts[u + 1];
        ++counts[v + 1];
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());

    std::vector<NodeId> cols(static_cast<std::size_t>(counts.back()));
    std::vector<EdgeOffset> cursor(counts.begin(), counts.end() - 1);
    for (const auto& [u, v] : edges) {
        if (u == v) continue;
        cols[cursor[u]++] = v;
        cols[cursor[v]++] = u;
    }

    // Sort and deduplicate each row, compacting in place.
    Graph g;
    g.row_offsets_.assign(static_cast<std::size_t>(num_nodes) + 1, 0);
    EdgeOffset write = 0;
    for (NodeId i = 0; i < num_nodes; ++i) {
        auto first = cols.begin() + counts[i];
        auto last = cols.begin() + counts[i + 1];
        std::sort(first, last);
        auto end = std::unique(first, last);
        for (auto it = first; it != end; ++it) cols[write++] = *it;
        g.row_offsets_[i + 1] = write;
    }
    cols.resize(static_cast<std::size_t>(write));
    cols.shrink_to_fit();
    g.col_indices_ = std::move(cols);
    g.original_ids_.resize(static_cast<std::size_t>(num_nodes));
    std::iota(g.original_ids_.begin(), g.original_ids_.end(), NodeId{0});
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
}

std::vector<NodeId> Graph::degrees() const {
    std::vector<NodeId> deg(static_cast<std::size_t>(num_nodes()));
    for (NodeId i = 0; i < num_nodes(); ++i) deg[i] = degree(i);
    return deg;
}

NodeId Graph::num_isolated() const {
    NodeId count = 0;
    for (NodeId i = 0; i < num_nodes(); ++i) count += degree(i) == 0;
    return count;
}

std::vector<Edge> Graph::edge_list() const {
    std::vector<Edge> out;
    out.reserve(static_cast<std::size_t>(num_edges()));
    for (NodeId u = 0; u < num_nodes(); ++u) {
        for (NodeId v : neighbors(u)) {
            if (u < v) out.emplace_back(u, v);
        }
    }
    return out;
}

std::pair<std::vector<NodeId>, NodeId> Graph::connected_components() const {
    const NodeId n = num_nodes();
    std::vector<NodeId> comp(static_cast<std::size_t>(n), -1);
    std::vector<NodeId> stack;
    NodeId count = 0;
    for (NodeId s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = count;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId u = stack.back();
            stack.pop_back();
            for (NodeId v : neighbors(u)) {
                if (comp[v] < 0) {
                    comp[v] = count;
                    stack.push_back(v);
                }
            }
        }
        ++count;
    }
    return {std::move(comp), count};
}

Graph Graph::induced_subgraph(std::span<const NodeId> nodes) const {
    if (nodes.empty()) throw InputError("induced subgraph needs at least one node");
    const NodeId n = num_nodes();
    std::vector<NodeId> local(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        NodeId v = nodes[k];
        if (v < 0 || v >= n) throw InputError("node " + std::to_string(v) + " out of range");
        if (local[v] >= 0) throw InputError("node " + std::to_string(v) + " listed twice");
        local[v] = static_cast<NodeId>(k);
    }

    Graph sub;
    sub.row_offsets_.assign(nodes.size() + 1, 0);
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        EdgeOffset kept = 0;
        for (NodeId v : neighbors(nodes[k])) kept += local[v] >= 0;
        sub.row_offsets_[k + 1] = sub.row_offsets_[k] + kept;
    }
    sub.col_indices_.resize(static_cast<std::size_t>(sub.row_offsets_.back()));
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        auto out = sub.col_indices_.begin() + sub.row_offsets_[k];
        auto begin = out;
        for (NodeId v : neighbors(nodes[k])) {
            if (local[v] >= 0) *out++ = local[v];
        }
        std::sort(begin, out);
    }
    sub.original_ids_.resize(nodes.size());
    for (std::size_t k = 0; k < nodes.size(); ++k) sub.original_ids_[k] = original_ids_[nodes[k]];
    return sub;
}

Graph Graph::permuted(std::span<const NodeId> perm) const {
    const NodeId n = num_nodes();
    if (static_cast<NodeId>(perm.size()) != n) throw InputError("permutation size mismatch");
    std::vector<NodeId> inverse(static_cast<std::size_t>(n), -1);
    for (NodeId v = 0; v < n; ++v) {
        NodeId p = perm[v];
        if (p < 0 || p >= n || inverse[p] >= 0) throw InputError("not a permutation");
        inverse[p] = v;
    }
    // Node p of the result is node inverse[p] of this graph.
    Graph out = induced_subgraph(inverse);
    return out;
}

CorrectedDegrees corrected_degrees(const Graph& g, double tau, double epsilon) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) throw InputError("epsilon must be positive");
    if (!std::isfinite(tau)) throw InputError("tau must be finite");
    const NodeId n = g.num_nodes();
    CorrectedDegrees cd;
    cd.tau = tau;
    cd.epsilon = epsilon;
    cd.values.resize(static_cast<std::size_t>(n));
    cd.inv_sqrt.resize(static_cast<std::size_t>(n));
    for (NodeId i = 0; i < n; ++i) {
        const double deg = g.degree(i);
        double value;
        if (tau >= 0.0) {
            value = deg + tau;
        } else {
            if (deg == 0.0) {
                throw InputError("node " + std::to_string(i) +
                                 " is isolated; negative degree correction needs deg > epsilon");
            }
            value = deg - std::min(-tau, deg - epsilon);
        }
        if (!(value > 0.0)) {
            throw InputError("node " + std::to_string(i) + " has non-positive corrected degree (isolated with tau = 0?)");
        }
        cd.values[i] = value;
        cd.inv_sqrt[i] = 1.0 / std::sqrt(value);
    }
    return cd;
}

}  // namespace infrared
