#include "infrared/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <omp.h>

#include "infrared/errors.hpp"
#include "random.hpp"

namespace infrared {

namespace {

// Row chunk for column statistics. Partial sums are combined in chunk order,
// so results do not depend on the thread count.
constexpr std::size_t kStatChunk = 2048;

void check_shapes(const Graph& g, const CorrectedDegrees& cd, std::size_t rows) {
    const auto n = static_cast<std::size_t>(g.num_nodes());
    if (rows != n) {
        throw InputError("embedding has " + std::to_string(rows) + " rows, graph has " + std::to_string(n) + " nodes");
    }
    if (cd.inv_sqrt.size() != n) throw InputError("corrected degrees do not match the graph");
}

// out_i = theta z_i + alpha s_i sum_{j in N(i)} s_j z_j, optionally followed by tanh.
template <typename T>
void propagate_row(const Graph& g, const double* inv_sqrt, const DenseMatrix<T>& z, DenseMatrix<T>& out,
                   NodeId i, T theta, T alpha, bool apply_tanh) {
    const std::size_t d = z.cols();
    T* acc = out.row(static_cast<std::size_t>(i)).data();
    std::fill(acc, acc + d, T{0});
    for (NodeId j : g.neighbors(i)) {
        const T s = static_cast<T>(inv_sqrt[j]);
        const T* zj = z.row(static_cast<std::size_t>(j)).data();
        for (std::size_t c = 0; c < d; ++c) acc[c] += s * zj[c];
    }
    const T scale = alpha * static_cast<T>(inv_sqrt[i]);
    const T* zi = z.row(static_cast<std::size_t>(i)).data();
    if (apply_tanh) {
        for (std::size_t c = 0; c < d; ++c) acc[c] = std::tanh(theta * zi[c] + scale * acc[c]);
    } else {
        for (std::size_t c = 0; c < d; ++c) acc[c] = theta * zi[c] + scale * acc[c];
    }
}

template <typename T>
void propagate_parallel(const Graph& g, const CorrectedDegrees& cd, const DenseMatrix<T>& z, DenseMatrix<T>& out,
                        double theta, double alpha, bool apply_tanh) {
    const NodeId n = g.num_nodes();
    const double* inv_sqrt = cd.inv_sqrt.data();
#pragma omp parallel for schedule(dynamic, 256)
    for (NodeId i = 0; i < n; ++i) {
        propagate_row(g, inv_sqrt, z, out, i, static_cast<T>(theta), static_cast<T>(alpha), apply_tanh);
    }
}

template <typename T>
void normalize_columns(DenseMatrix<T>& z, const std::vector<double>& mean, const std::vector<double>& stddev) {
    const std::size_t n = z.rows();
    const std::size_t d = z.cols();
    std::vector<T> shift(d), inv(d);
    for (std::size_t c = 0; c < d; ++c) {
        shift[c] = static_cast<T>(mean[c]);
        inv[c] = stddev[c] < kStdFloor ? T{0} : static_cast<T>(1.0 / stddev[c]);
    }
#pragma omp parallel for schedule(static)
    for (std::size_t i = 0; i < n; ++i) {
        T* r = z.row(i).data();
        for (std::size_t c = 0; c < d; ++c) r[c] = (r[c] - shift[c]) * inv[c];
    }
}

double variance_divisor(std::size_t n, StdConvention conv) {
    if (conv == StdConvention::Sample && n > 1) return static_cast<double>(n - 1);
    return static_cast<double>(n);
}

template <typename T>
std::size_t zscore_parallel(DenseMatrix<T>& z, StdConvention conv) {
    const std::size_t n = z.rows();
    const std::size_t d = z.cols();
    if (n == 0 || d == 0) return 0;
    const std::size_t chunks = (n + kStatChunk - 1) / kStatChunk;
    std::vector<double> partial(chunks * d);

    auto reduce = [&](auto&& term) {
#pragma omp parallel for schedule(static)
        for (std::size_t b = 0; b < chunks; ++b) {
            double* acc = partial.data() + b * d;
            std::fill(acc, acc + d, 0.0);
            const std::size_t end = std::min(n, (b + 1) * kStatChunk);
            for (std::size_t i = b * kStatChunk; i < end; ++i) {
                const T* r = z.row(i).data();
                for (std::size_t c = 0; c < d; ++c) acc[c] += term(r[c], c);
            }
        }
        std::vector<double> total(d, 0.0);
        for (std::size_t b = 0; b < chunks; ++b)
            for (std::size_t c = 0; c < d; ++c) total[c] += partial[b * d + c];
        return total;
    };

    std::vector<double> mean = reduce([](T x, std::size_t) { return static_cast<double>(x); });
    for (auto& m : mean) m /= static_cast<double>(n);
    std::vector<double> var = reduce([&](T x, std::size_t c) {
        const double dev = static_cast<double>(x) - mean[c];
        return dev * dev;
    });
    std::vector<double> stddev(d);
    std::size_t degenerate = 0;
    for (std::size_t c = 0; c < d; ++c) {
        stddev[c] = std::sqrt(var[c] / variance_divisor(n, conv));
        degenerate += stddev[c] < kStdFloor;
    }
    normalize_columns(z, mean, stddev);
    return degenerate;
}

template <typename T>
void sigmoid_inplace(DenseMatrix<T>& z) {
    // Keep the result strictly inside (0, 1) even where T rounds to an endpoint.
    const T lo = std::numeric_limits<T>::min();
    const T hi = T{1} - std::numeric_limits<T>::epsilon() / 2;
    auto values = z.values();
    const std::size_t total = values.size();
    T* v = values.data();
#pragma omp parallel for schedule(static)
    for (std::size_t k = 0; k < total; ++k) {
        const T s = T{1} / (T{1} + std::exp(-v[k]));
        v[k] = std::clamp(s, lo, hi);
    }
}

}  // namespace

void EmbedConfig::validate() const {
    if (num_layers < 1) throw InputError("number of layers must be at least 1");
    if (dim < 1) throw InputError("embedding dimension must be at least 1");
    if (!(theta >= 0.0 && theta <= 1.0)) throw InputError("theta must lie in [0, 1]");
    if (!(alpha >= -1.0 && alpha <= 1.0)) throw InputError("alpha must lie in [-1, 1]");
    if (!std::isfinite(tau)) throw InputError("tau must be finite");
    if (!(epsilon > 0.0)) throw InputError("epsilon must be positive");
}

template <typename T>
DenseMatrix<T> init_noise(std::size_t n, std::size_t d, std::uint64_t seed, std::span<const NodeId> row_keys) {
    if (n == 0 || d == 0) throw InputError("noise matrix needs positive dimensions");
    if (!row_keys.empty() && row_keys.size() != n) throw InputError("one noise key per row required");
    DenseMatrix<T> z(n, d);
    const double scale = 1.0 / std::sqrt(static_cast<double>(d));
    const auto rows = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < rows; ++i) {
        const std::uint64_t key = row_keys.empty() ? static_cast<std::uint64_t>(i)
                                                   : static_cast<std::uint64_t>(row_keys[static_cast<std::size_t>(i)]);
        detail::SplitMix64 stream(detail::mix(seed, key));
        T* r = z.row(static_cast<std::size_t>(i)).data();
        for (std::size_t c = 0; c < d; c += 2) {
            const double u1 = detail::unit_open_closed(stream.next());
            const double u2 = detail::unit_closed_open(stream.next());
            const double radius = std::sqrt(-2.0 * std::log(u1)) * scale;
            const double angle = 2.0 * std::numbers::pi * u2;
            r[c] = static_cast<T>(radius * std::cos(angle));
            if (c + 1 < d) r[c + 1] = static_cast<T>(radius * std::sin(angle));
        }
    }
    return z;
}

template <typename T>
DenseMatrix<T> propagate(const Graph& g, const CorrectedDegrees& cd, const DenseMatrix<T>& z, double theta,
                         double alpha) {
    check_shapes(g, cd, z.rows());
    DenseMatrix<T> out(z.rows(), z.cols());
    propagate_parallel(g, cd, z, out, theta, alpha, false);
    return out;
}

template <typename T>
std::size_t zscore_columns_inplace(DenseMatrix<T>& z, StdConvention conv) {
    return zscore_parallel(z, conv);
}

template <typename T>
DenseMatrix<T> embed_from_noise(const Graph& g, const CorrectedDegrees& cd, DenseMatrix<T> noise,
                                const EmbedConfig& cfg, EmbedReport* report, const LayerObserver<T>& observer) {
    cfg.validate();
    check_shapes(g, cd, noise.rows());
    DenseMatrix<T> current = std::move(noise);
    DenseMatrix<T> next(current.rows(), current.cols());
    std::size_t degenerate = 0;
    for (int layer = 1; layer <= cfg.num_layers; ++layer) {
        propagate_parallel(g, cd, current, next, cfg.theta, cfg.alpha, cfg.apply_tanh);
        std::swap(current, next);
        if (cfg.apply_znorm) degenerate += zscore_parallel(current, cfg.std_convention);
        if (observer) observer(layer, current);
    }
    for (T x : current.values()) {
        if (!std::isfinite(x)) throw NumericalError("non-finite value in embeddings");
    }
    sigmoid_inplace(current);
    if (report) report->degenerate_columns = degenerate;
    return current;
}

EmbeddingMatrix embed(const Graph& g, const EmbedConfig& cfg, EmbedReport* report) {
    cfg.validate();
    CorrectedDegrees cd = corrected_degrees(g, cfg.tau, cfg.epsilon);
    auto noise = init_noise<float>(static_cast<std::size_t>(g.num_nodes()), static_cast<std::size_t>(cfg.dim), cfg.seed,
                                   g.original_ids());
    return embed_from_noise(g, cd, std::move(noise), cfg, report);
}

DenseMatrix<double> embed_double(const Graph& g, const EmbedConfig& cfg, EmbedReport* report) {
    cfg.validate();
    CorrectedDegrees cd = corrected_degrees(g, cfg.tau, cfg.epsilon);
    auto noise = init_noise<double>(static_cast<std::size_t>(g.num_nodes()), static_cast<std::size_t>(cfg.dim),
                                    cfg.seed, g.original_ids());
    return embed_from_noise(g, cd, std::move(noise), cfg, report);
}

namespace kernels {

namespace reference {

template <typename T>
DenseMatrix<T> propagate(const Graph& g, const CorrectedDegrees& cd, const DenseMatrix<T>& z, double theta,
                         double alpha) {
    check_shapes(g, cd, z.rows());
    DenseMatrix<T> out(z.rows(), z.cols());
    for (NodeId i = 0; i < g.num_nodes(); ++i) {
        propagate_row(g, cd.inv_sqrt.data(), z, out, i, static_cast<T>(theta), static_cast<T>(alpha), false);
    }
    return out;
}

template <typename T>
std::size_t zscore_columns_inplace(DenseMatrix<T>& z, StdConvention conv) {
    const std::size_t n = z.rows();
    const std::size_t d = z.cols();
    std::size_t degenerate = 0;
    for (std::size_t c = 0; c < d; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) sum += z(i, c);
        const double mean = sum / static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (z(i, c) - mean) * (z(i, c) - mean);
        const double sd = std::sqrt(ss / variance_divisor(n, conv));
        if (sd < kStdFloor) {
            ++degenerate;
            for (std::size_t i = 0; i < n; ++i) z(i, c) = T{0};
        } else {
            for (std::size_t i = 0; i < n; ++i) z(i, c) = static_cast<T>((z(i, c) - mean) / sd);
        }
    }
    return degenerate;
}

template DenseMatrix<float> propagate(const Graph&, const CorrectedDegrees&, const DenseMatrix<float>&, double, double);
template DenseMatrix<double> propagate(const Graph&, const CorrectedDegrees&, const DenseMatrix<double>&, double,
                                       double);
template std::size_t zscore_columns_inplace(DenseMatrix<float>&, StdConvention);
template std::size_t zscore_columns_inplace(DenseMatrix<double>&, StdConvention);

}  // namespace reference

void set_num_threads(int threads) {
    omp_set_num_threads(threads > 0 ? threads : omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

}  // namespace kernels

template DenseMatrix<float> init_noise(std::size_t, std::size_t, std::uint64_t, std::span<const NodeId>);
template DenseMatrix<double> init_noise(std::size_t, std::size_t, std::uint64_t, std::span<const NodeId>);
template DenseMatrix<float> propagate(const Graph&, const CorrectedDegrees&, const DenseMatrix<float>&, double, double);
template DenseMatrix<double> propagate(const Graph&, const CorrectedDegrees&, const DenseMatrix<double>&, double,
                                       double);
template std::size_t zscore_columns_inplace(DenseMatrix<float>&, StdConvention);
template std::size_t zscore_columns_inplace(DenseMatrix<double>&, StdConvention);
template DenseMatrix<float> embed_from_noise(const Graph&, const CorrectedDegrees&, DenseMatrix<float>,
                                             const EmbedConfig&, EmbedReport*, const LayerObserver<float>&);
template DenseMatrix<double> embed_from_noise(const Graph&, const CorrectedDegrees&, DenseMatrix<double>,
                                              const EmbedConfig&, EmbedReport*, const LayerObserver<double>&);

}  // namespace infrared
