#pragma once

#include <cstdint>
#include <span>

namespace infrared {

/// Co-membership counts over all n(n-1)/2 unordered node pairs.
struct PairCounts {
    std::uint64_t true_positive = 0;   // together in both
    std::uint64_t false_positive = 0;  // together in pred only
    std::uint64_t false_negative = 0;  // together in truth only
    std::uint64_t true_negative = 0;

    bool operator==(const PairCounts&) const = default;
};

struct PrecisionRecall {
    double precision = 1.0;
    double recall = 1.0;
    double f1 = 1.0;
};

/// Counts via the sparse contingency table, O(n) expected. Labels may be any
/// integers. Throws InputError on a length mismatch or n < 2.
PairCounts pair_counts(std::span<const int> truth, std::span<const int> pred);

/// precision = TP/(TP+FP), recall = TP/(TP+FN); an empty denominator yields 1.
/// f1 is 0 when precision + recall is 0.
PrecisionRecall precision_recall_f1(std::span<const int> truth, std::span<const int> pred);
PrecisionRecall precision_recall_f1(const PairCounts& c);

/// Adjusted Rand Index. Returns 1 when the chance-corrected denominator
/// vanishes, which only happens for identical all-one-block or all-singleton
/// partitions.
double ari(std::span<const int> truth, std::span<const int> pred);

/// Number of distinct labels.
std::size_t count_labels(std::span<const int> labels);

}  // namespace infrared
