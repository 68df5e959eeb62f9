#pragma once

#include <algorithm>
#include <filesystem>
#include <numeric>
#include <random>
#include <vector>

#include "infrared/graph.hpp"
#include "infrared/io.hpp"

namespace testutil {

using infrared::Edge;
using infrared::Graph;
using infrared::NodeId;

// G(n, p) plus a random spanning path, so no node is isolated.
inline Graph random_connected_graph(std::mt19937_64& rng, NodeId n, double p) {
    std::vector<NodeId> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<Edge> edges;
    for (std::size_t i = 1; i < order.size(); ++i) edges.emplace_back(order[i - 1], order[i]);
    std::bernoulli_distribution coin(p);
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.emplace_back(u, v);
        }
    }
    return Graph::from_edges(edges, n);
}

inline std::vector<std::vector<double>> dense_adjacency(const Graph& g) {
    const auto n = static_cast<std::size_t>(g.num_nodes());
    std::vector<std::vector<double>> a(n, std::vector<double>(n, 0.0));
    for (auto [u, v] : g.edge_list()) {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    return a;
}

// Corrected degree written straight from the definition.
inline double corrected(double deg, double tau, double eps) {
    if (tau >= 0) return deg + tau;
    return deg - std::min(-tau, deg - eps);
}

inline std::filesystem::path data_dir() { return INFRARED_DATA_DIR; }

inline infrared::io::LoadedGraph karate() { return infrared::io::read_edge_list(data_dir() / "karate.tsv"); }

inline std::vector<int> karate_faction(const infrared::io::LoadedGraph& k) {
    return infrared::io::read_labels(data_dir() / "karate_truth.tsv", k.file_ids);
}

inline std::vector<int> random_labels(std::mt19937_64& rng, std::size_t n, int k) {
    std::uniform_int_distribution<int> pick(0, k - 1);
    std::vector<int> out(n);
    for (auto& x : out) x = pick(rng);
    return out;
}

}  // namespace testutil
