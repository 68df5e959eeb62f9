#include "infrared/metrics.hpp"

#include <string>
#include <unordered_map>
#include <vector>

#include "infrared/errors.hpp"

namespace infrared {

namespace {

// C(x, 2), exact in 64 bits for x < 2^32.
std::uint64_t pairs(std::uint64_t x) { return x < 2 ? 0 : x * (x - 1) / 2; }

std::vector<std::uint32_t> compact(std::span<const int> labels, std::size_t& count) {
    std::unordered_map<int, std::uint32_t> ids;
    std::vector<std::uint32_t> out(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        auto [it, inserted] = ids.try_emplace(labels[i], static_cast<std::uint32_t>(ids.size()));
        out[i] = it->second;
    }
    count = ids.size();
    return out;
}

struct Contingency {
    std::uint64_t n = 0;
    std::uint64_t sum_cells = 0;  // sum C(n_ij, 2)
    std::uint64_t sum_truth = 0;  // sum C(a_i, 2)
    std::uint64_t sum_pred = 0;   // sum C(b_j, 2)
};

Contingency contingency(std::span<const int> truth, std::span<const int> pred) {
    if (truth.size() != pred.size()) {
        throw InputError("partition lengths differ: " + std::to_string(truth.size()) + " vs " +
                         std::to_string(pred.size()));
    }
    if (truth.size() < 2) throw InputError("pairwise metrics need at least two nodes");
    std::size_t kt = 0, kp = 0;
    const auto t = compact(truth, kt);
    const auto p = compact(pred, kp);

    std::vector<std::uint64_t> row(kt, 0), col(kp, 0);
    std::unordered_map<std::uint64_t, std::uint64_t> cells;
    cells.reserve(std::min<std::size_t>(truth.size(), kt * kp));
    for (std::size_t i = 0; i < t.size(); ++i) {
        ++row[t[i]];
        ++col[p[i]];
        ++cells[(static_cast<std::uint64_t>(t[i]) << 32) | p[i]];
    }
    Contingency c;
    c.n = truth.size();
    for (const auto& [key, count] : cells) c.sum_cells += pairs(count);
    for (auto a : row) c.sum_truth += pairs(a);
    for (auto b : col) c.sum_pred += pairs(b);
    return c;
}

}  // namespace

PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred) {
    const Contingency c = contingency(truth, pred);
    PairCounts out;
    out.true_positive = c.sum_cells;
    out.false_positive = c.sum_pred - c.sum_cells;
    out.false_negative = c.sum_truth - c.sum_cells;
    out.true_negative = pairs(c.n) - c.sum_truth - c.sum_pred + c.sum_cells;
    return out;
}

PrecisionRecall precision_recall_f1(const PairCounts& c) {
    PrecisionRecall r;
    const auto tp = static_cast<double>(c.true_positive);
    const std::uint64_t pred_pairs = c.true_positive + c.false_positive;
    const std::uint64_t truth_pairs = c.true_positive + c.false_negative;
    r.precision = pred_pairs == 0 ? 1.0 : tp / static_cast<double>(pred_pairs);
    r.recall = truth_pairs == 0 ? 1.0 : tp / static_cast<double>(truth_pairs);
    r.f1 = r.precision + r.recall == 0.0 ? 0.0 : 2.0 * r.precision * r.recall / (r.precision + r.recall);
    return r;
}

PrecisionRecall precision_recall_f1(std::span<const int> truth, std::span<const int> pred) {
    return precision_recall_f1(pair_counts(truth, pred));
}

double ari(std::span<const int> truth, std::span<const int> pred) {
    const Contingency c = contingency(truth, pred);
    const auto index = static_cast<double>(c.sum_cells);
    const auto a = static_cast<double>(c.sum_truth);
    const auto b = static_cast<double>(c.sum_pred);
    const double expected = a * b / static_cast<double>(pairs(c.n));
    const double max_index = 0.5 * (a + b);
    const double denom = max_index - expected;
    if (denom == 0.0) return 1.0;
    return (index - expected) / denom;
}

std::size_t count_labels(std::span<const int> labels) {
    std::size_t k = 0;
    compact(labels, k);
    return k;
}

}  // namespace infrared
