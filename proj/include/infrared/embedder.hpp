#pragma once

#include <cstdint>
#include <functional>

#include "infrared/graph.hpp"
#include "infrared/matrix.hpp"

namespace infrared {

enum class StdConvention { Population, Sample };

inline constexpr double kStdFloor = 1e-8;

struct EmbedConfig {
    double tau = -6.0;
    int num_layers = 10;
    int dim = 64;
    std::uint64_t seed = 0;
    /// Filter kernel (theta + alpha) I - alpha * Lambda. alpha > 0 is low-pass.
    double theta = 0.1;
    double alpha = 1.0;
    double epsilon = kDefaultEpsilon;
    StdConvention std_convention = StdConvention::Population;
    /// Ablation switches; both on for the actual method.
    bool apply_tanh = true;
    bool apply_znorm = true;

    void validate() const;
};

/// Per-run diagnostics.
struct EmbedReport {
    /// Columns whose standard deviation fell below kStdFloor, summed over layers.
    std::size_t degenerate_columns = 0;
};

/// N x d i.i.d. N(0, 1/d) noise.
///
/// Row i is drawn from its own SplitMix64 stream keyed by (seed, row_keys[i])
/// and mapped through Box-Muller, so a node keeps the same noise row when it
/// reappears in a larger or reordered graph. Keys default to the row index.
template <typename T>
DenseMatrix<T> init_noise(std::size_t n, std::size_t d, std::uint64_t seed,
                          std::span<const NodeId> row_keys = {});

/// theta * Z + alpha * D^-1/2 A D^-1/2 Z in O((N + M) d), rows in parallel.
template <typename T>
DenseMatrix<T> propagate(const Graph& g, const CorrectedDegrees& cd, const DenseMatrix<T>& z, double theta,
                         double alpha);

/// Column-wise z-score in place. Columns with std below kStdFloor are zeroed.
/// Returns the number of such columns.
template <typename T>
std::size_t zscore_columns_inplace(DenseMatrix<T>& z, StdConvention conv = StdConvention::Population);

template <typename T>
DenseMatrix<T> zscore_columns(DenseMatrix<T> z, StdConvention conv = StdConvention::Population) {
    zscore_columns_inplace(z, conv);
    return z;
}

/// Called after every layer with the layer index (1-based) and Z^(l).
template <typename T>
using LayerObserver = std::function<void(int, const DenseMatrix<T>&)>;

/// L layers of Z <- ZNorm(tanh(phi * Z)) starting from `noise`, then an
/// elementwise sigmoid. `cd` must have been built from `g`.
template <typename T>
DenseMatrix<T> embed_from_noise(const Graph& g, const CorrectedDegrees& cd, DenseMatrix<T> noise,
                                const EmbedConfig& cfg, EmbedReport* report = nullptr,
                                const LayerObserver<T>& observer = {});

/// Single-precision feed-forward pass: corrected degrees, noise, layers, sigmoid.
/// Noise rows are keyed by g.original_ids().
EmbeddingMatrix embed(const Graph& g, const EmbedConfig& cfg, EmbedReport* report = nullptr);

/// Double-precision variant of embed, used as the oracle path in tests.
DenseMatrix<double> embed_double(const Graph& g, const EmbedConfig& cfg, EmbedReport* report = nullptr);

namespace kernels {

/// Serial reference implementations kept for testing and benchmarking the
/// parallel kernels above. propagate uses the same per-row summation order and
/// matches bitwise; zscore sums each column straight through, so it agrees
/// with the chunked parallel reduction only up to rounding.
namespace reference {

template <typename T>
DenseMatrix<T> propagate(const Graph& g, const CorrectedDegrees& cd, const DenseMatrix<T>& z, double theta,
                         double alpha);

template <typename T>
std::size_t zscore_columns_inplace(DenseMatrix<T>& z, StdConvention conv = StdConvention::Population);

}  // namespace reference

/// Caps the OpenMP team size used by the kernels (<= 0 restores the default).
void set_num_threads(int threads);
int max_threads();

}  // namespace kernels

}  // namespace infrared
