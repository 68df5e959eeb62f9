#include "infrared/generator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "infrared/errors.hpp"
#include "random.hpp"

namespace infrared {

namespace {

using detail::uniform01;

std::uint64_t pair_key(NodeId u, NodeId v) {
    if (u > v) std::swap(u, v);
    return (static_cast<std::uint64_t>(u) << 32) | static_cast<std::uint32_t>(v);
}

Edge key_pair(std::uint64_t key) {
    return {static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xFFFFFFFFULL)};
}

// Splits `total` into parts proportional to `shares` (largest remainder).
std::vector<std::int64_t> apportion(std::int64_t total, const std::vector<double>& shares) {
    const double sum = std::accumulate(shares.begin(), shares.end(), 0.0);
    std::vector<std::int64_t> parts(shares.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        const double exact = static_cast<double>(total) * shares[i] / sum;
        parts[i] = static_cast<std::int64_t>(std::floor(exact));
        assigned += parts[i];
        remainders.emplace_back(exact - static_cast<double>(parts[i]), i);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::int64_t k = 0; k < total - assigned; ++k) ++parts[remainders[static_cast<std::size_t>(k)].second];
    return parts;
}

// Draws indices proportionally to a fixed weight vector.
class WeightedSampler {
public:
    explicit WeightedSampler(std::vector<double> weights) : cumulative_(std::move(weights)) {
        std::partial_sum(cumulative_.begin(), cumulative_.end(), cumulative_.begin());
    }

    std::size_t operator()(std::mt19937_64& rng) const {
        const double x = uniform01(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), x);
        return std::min(static_cast<std::size_t>(it - cumulative_.begin()), cumulative_.size() - 1);
    }

private:
    std::vector<double> cumulative_;
};

// Exactly `count` distinct pairs drawn by weighted rejection: draws the
// deficit, deduplicates, repeats. `draw` returns a key or UINT64_MAX to reject.
template <typename Draw>
void sample_sparse_pairs(std::int64_t count, std::mt19937_64& rng, Draw&& draw, std::vector<std::uint64_t>& out) {
    std::vector<std::uint64_t> keys;
    keys.reserve(static_cast<std::size_t>(count));
    std::int64_t rounds = 0;
    while (static_cast<std::int64_t>(keys.size()) < count) {
        const std::int64_t deficit = count - static_cast<std::int64_t>(keys.size());
        for (std::int64_t k = 0; k < deficit; ++k) {
            std::uint64_t key;
            do {
                key = draw(rng);
            } while (key == UINT64_MAX);
            keys.push_back(key);
        }
        std::sort(keys.begin(), keys.end());
        keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
        if (++rounds > 10000) throw InputError("edge sampler failed to converge; the graph is too dense");
    }
    out.insert(out.end(), keys.begin(), keys.end());
}

// Exactly `count` distinct pairs among `candidates` with probability weights,
// without replacement (Efraimidis-Spirakis keys). Used for dense blocks.
void sample_dense_pairs(std::int64_t count, std::vector<std::pair<std::uint64_t, double>> candidates,
                        std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
    std::vector<std::pair<double, std::uint64_t>> ranked;
    ranked.reserve(candidates.size());
    for (const auto& [key, w] : candidates) {
        const double u = detail::unit_open_closed(rng());
        ranked.emplace_back(std::log(u) / w, key);
    }
    std::partial_sort(ranked.begin(), ranked.begin() + count, ranked.end(),
                      [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::int64_t k = 0; k < count; ++k) out.push_back(ranked[static_cast<std::size_t>(k)].second);
}

}  // namespace

NodeId SbmParams::resolved_blocks() const {
    if (num_blocks > 0) return num_blocks;
    return std::max<NodeId>(1, static_cast<NodeId>(std::floor(std::pow(static_cast<double>(num_nodes), 0.35))));
}

void SbmParams::validate() const {
    if (num_nodes < 1) throw InputError("number of nodes must be positive");
    if (num_blocks < 0) throw InputError("number of blocks must be positive (0 selects the default)");
    if (resolved_blocks() > num_nodes) throw InputError("more blocks than nodes");
    if (!(block_size_heterogeneity > 0.0)) throw InputError("block size heterogeneity must be positive");
    if (!(within_between_ratio > 0.0)) throw InputError("within/between ratio must be positive");
    if (!(target_avg_degree > 0.0)) throw InputError("average degree must be positive");
    if (!(degree_exponent >= 0.0)) throw InputError("degree exponent must be non-negative");
    if (!(degree_spread >= 1.0)) throw InputError("degree spread must be at least 1");
}

GeneratedGraph generate_sbm(const SbmParams& p) {
    p.validate();
    const NodeId n = p.num_nodes;
    const NodeId k = p.resolved_blocks();
    std::mt19937_64 rng(p.seed);

    // Block sizes from a symmetric Dirichlet, every block non-empty.
    std::vector<double> shares(static_cast<std::size_t>(k));
    const double concentration = 10.0 / p.block_size_heterogeneity;
    for (auto& s : shares) s = detail::gamma_sample(rng, concentration);
    if (std::accumulate(shares.begin(), shares.end(), 0.0) <= 0.0) std::fill(shares.begin(), shares.end(), 1.0);
    std::vector<std::int64_t> sizes(static_cast<std::size_t>(k), 1);
    {
        auto extra = apportion(n - k, shares);
        for (NodeId b = 0; b < k; ++b) sizes[b] += extra[b];
    }

    std::vector<int> block_of(static_cast<std::size_t>(n));
    {
        std::size_t pos = 0;
        for (NodeId b = 0; b < k; ++b)
            for (std::int64_t i = 0; i < sizes[b]; ++i) block_of[pos++] = b;
        detail::shuffle(block_of.begin(), block_of.end(), rng);
    }
    std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(k));
    for (NodeId v = 0; v < n; ++v) members[block_of[v]].push_back(v);

    // Node weight = sum of two draws from a power law truncated to
    // [1, spread], the undirected analogue of in-degree + out-degree.
    std::vector<double> weight(static_cast<std::size_t>(n), 1.0);
    if (p.degree_exponent > 0.0 && p.degree_spread > 1.0) {
        const double g = 1.0 - p.degree_exponent;
        auto draw = [&] {
            const double u = uniform01(rng);
            if (std::abs(g) < 1e-12) return std::pow(p.degree_spread, u);
            return std::pow(1.0 + u * (std::pow(p.degree_spread, g) - 1.0), 1.0 / g);
        };
        for (auto& w : weight) {
            const double a = draw();
            w = a + draw();
        }
    }

    const auto total_edges = static_cast<std::int64_t>(std::llround(static_cast<double>(n) * p.target_avg_degree / 2.0));
    std::int64_t within_edges = k == 1 ? total_edges
                                       : static_cast<std::int64_t>(std::llround(
                                             static_cast<double>(total_edges) * p.within_between_ratio /
                                             (1.0 + p.within_between_ratio)));
    const std::int64_t between_edges = total_edges - within_edges;

    // Pair-strength model: expected edges between blocks r and s scale with
    // W_r * W_s (W = weight mass), with one strength inside blocks and another
    // between them, fixed by the within/between ratio.
    std::vector<double> block_mass(static_cast<std::size_t>(k), 0.0);
    for (NodeId v = 0; v < n; ++v) block_mass[block_of[v]] += weight[v];
    std::vector<double> within_share(block_mass);
    for (auto& w : within_share) w *= w;
    const auto within_per_block = apportion(within_edges, within_share);

    std::vector<std::uint64_t> keys;
    keys.reserve(static_cast<std::size_t>(total_edges));

    for (NodeId b = 0; b < k; ++b) {
        const auto& mem = members[b];
        const std::int64_t want = within_per_block[b];
        const std::int64_t pairs = static_cast<std::int64_t>(mem.size()) * (static_cast<std::int64_t>(mem.size()) - 1) / 2;
        if (want == 0) continue;
        if (want > pairs) {
            throw InputError("block " + std::to_string(b) + " of size " + std::to_string(mem.size()) + " cannot hold " +
                             std::to_string(want) + " edges (edge probability > 1)");
        }
        if (2 * want > pairs) {
            std::vector<std::pair<std::uint64_t, double>> candidates;
            candidates.reserve(static_cast<std::size_t>(pairs));
            for (std::size_t i = 0; i < mem.size(); ++i)
                for (std::size_t j = i + 1; j < mem.size(); ++j)
                    candidates.emplace_back(pair_key(mem[i], mem[j]), weight[mem[i]] * weight[mem[j]]);
            sample_dense_pairs(want, std::move(candidates), rng, keys);
        } else {
            std::vector<double> w(mem.size());
            for (std::size_t i = 0; i < mem.size(); ++i) w[i] = weight[mem[i]];
            WeightedSampler pick(std::move(w));
            sample_sparse_pairs(want, rng, [&](std::mt19937_64& r) {
                const NodeId u = mem[pick(r)];
                const NodeId v = mem[pick(r)];
                return u == v ? UINT64_MAX : pair_key(u, v);
            }, keys);
        }
    }

    if (between_edges > 0) {
        std::int64_t pairs = static_cast<std::int64_t>(n) * (n - 1) / 2;
        for (const auto& mem : members) pairs -= static_cast<std::int64_t>(mem.size()) * (static_cast<std::int64_t>(mem.size()) - 1) / 2;
        if (between_edges > pairs) throw InputError("too many between-block edges requested (edge probability > 1)");
        if (2 * between_edges > pairs) {
            std::vector<std::pair<std::uint64_t, double>> candidates;
            for (NodeId u = 0; u < n; ++u)
                for (NodeId v = u + 1; v < n; ++v)
                    if (block_of[u] != block_of[v]) candidates.emplace_back(pair_key(u, v), weight[u] * weight[v]);
            sample_dense_pairs(between_edges, std::move(candidates), rng, keys);
        } else {
            WeightedSampler pick(weight);
            sample_sparse_pairs(between_edges, rng, [&](std::mt19937_64& r) {
                const auto u = static_cast<NodeId>(pick(r));
                const auto v = static_cast<NodeId>(pick(r));
                return block_of[u] == block_of[v] ? UINT64_MAX : pair_key(u, v);
            }, keys);
        }
    }

    std::vector<Edge> edges(keys.size());
    std::transform(keys.begin(), keys.end(), edges.begin(), key_pair);
    keys.clear();
    keys.shrink_to_fit();
    Graph full = Graph::from_edges(edges, n);
    edges.clear();

    // Keep the largest connected component (lowest component id on ties).
    auto [comp, num_comp] = full.connected_components();
    GeneratedGraph out;
    out.sampled_nodes = n;
    std::vector<int> kept_labels;
    if (num_comp == 1) {
        out.graph = std::move(full);
        kept_labels = block_of;
    } else {
        std::vector<NodeId> comp_size(static_cast<std::size_t>(num_comp), 0);
        for (NodeId c : comp) ++comp_size[c];
        const auto largest = static_cast<NodeId>(std::max_element(comp_size.begin(), comp_size.end()) - comp_size.begin());
        std::vector<NodeId> keep;
        for (NodeId v = 0; v < n; ++v)
            if (comp[v] == largest) keep.push_back(v);
        Graph sub = full.induced_subgraph(keep);
        // Re-anchor: the generated graph is a fresh graph with identity ids.
        out.graph = Graph::from_edges(sub.edge_list(), sub.num_nodes());
        for (NodeId v : keep) kept_labels.push_back(block_of[v]);
    }

    // Compact block ids, dropping blocks that lost all their nodes.
    std::vector<int> remap(static_cast<std::size_t>(k), -1);
    for (int l : kept_labels) remap[l] = 0;
    int next = 0;
    for (auto& r : remap)
        if (r == 0) r = next++;
    for (auto& l : kept_labels) l = remap[l];
    out.truth.labels = std::move(kept_labels);
    out.truth.num_blocks = next;
    return out;
}

SnowballStream snowball_split(const Graph& g, int steps, std::uint64_t seed) {
    const NodeId n = g.num_nodes();
    if (steps < 1) throw InputError("number of snowball steps must be at least 1");
    if (steps > n) throw InputError("more snowball steps than nodes");

    std::mt19937_64 rng(seed);
    std::vector<NodeId> restart(static_cast<std::size_t>(n));
    std::iota(restart.begin(), restart.end(), NodeId{0});
    detail::shuffle(restart.begin(), restart.end(), rng);

    std::vector<NodeId> order;
    order.reserve(static_cast<std::size_t>(n));
    std::vector<char> visited(static_cast<std::size_t>(n), 0);
    std::vector<NodeId> scratch;
    for (NodeId start : restart) {
        if (visited[start]) continue;
        visited[start] = 1;
        std::size_t head = order.size();
        order.push_back(start);
        while (head < order.size()) {
            const NodeId u = order[head++];
            auto nb = g.neighbors(u);
            scratch.assign(nb.begin(), nb.end());
            detail::shuffle(scratch.begin(), scratch.end(), rng);
            for (NodeId v : scratch) {
                if (!visited[v]) {
                    visited[v] = 1;
                    order.push_back(v);
                }
            }
        }
    }

    SnowballStream stream;
    stream.subsets.resize(static_cast<std::size_t>(steps));
    const NodeId base = n / steps;
    const NodeId extra = n % steps;
    std::size_t pos = 0;
    for (int t = 0; t < steps; ++t) {
        const NodeId size = base + (t < extra ? 1 : 0);
        stream.subsets[t].assign(order.begin() + static_cast<std::ptrdiff_t>(pos),
                                 order.begin() + static_cast<std::ptrdiff_t>(pos + size));
        pos += size;
    }
    return stream;
}

}  // namespace infrared
