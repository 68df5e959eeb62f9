#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "infrared/graph.hpp"

namespace infrared::spectral {

/// Largest graph the dense path accepts.
inline constexpr NodeId kDenseNodeCap = 5000;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool contains(double x, double tol = 0.0) const { return x >= lo - tol && x <= hi + tol; }
};

struct SpectrumReport {
    double tau = 0.0;
    /// Ascending.
    std::vector<double> eigenvalues;
    /// Column s belongs to eigenvalues[s]; each column's largest-magnitude
    /// entry is made positive.
    Eigen::MatrixXd eigenvectors;
    std::size_t num_infrared = 0;     // eigenvalue < 0
    std::size_t num_ultraviolet = 0;  // eigenvalue > 2
    Interval gershgorin;
};

/// I - D_tau^-1/2 A D_tau^-1/2 as a dense matrix. Throws InputError above kDenseNodeCap.
Eigen::MatrixXd laplacian_tau(const Graph& g, double tau, double epsilon = kDefaultEpsilon);

/// Full symmetric eigendecomposition of laplacian_tau. Eigenvalues within
/// `zero_tol` of 0 or 2 are not counted as infrared/ultraviolet.
SpectrumReport spectrum(const Graph& g, double tau, double epsilon = kDefaultEpsilon, double zero_tol = 1e-9);

/// Gershgorin discs of I - D_tau^-1 A: centre 1, radius deg_i / (D_tau)_ii.
/// Returns [1 - max r, 1 + max r].
Interval gershgorin_interval(const Graph& g, double tau, double epsilon = kDefaultEpsilon);

/// Largest residual ||L u - lambda u|| over all eigenpairs.
double max_eigen_residual(const Eigen::MatrixXd& laplacian, const SpectrumReport& report);

struct KarateSignReport {
    bool zero_mode_single_sign = false;
    /// Fraction of nodes whose u_1 sign matches their faction (best of both sign assignments).
    double low_mode_agreement = 0.0;
    double low_mode_ari = 0.0;
    /// Entries of the highest-frequency eigenvector at nodes 34 and 23 (1-indexed).
    double high_mode_node34 = 0.0;
    double high_mode_node23 = 0.0;
    /// Edges inside one faction whose endpoints get opposite signs in u_{N-1}.
    std::size_t high_mode_same_block_flips = 0;
    /// Same count for u_1.
    std::size_t low_mode_same_block_flips = 0;
};

/// Eigenvector sign analysis on the (tau = 0) Laplacian of Zachary's karate
/// club. `faction` holds one label per node. Throws InputError unless g has
/// 34 nodes and 78 edges.
KarateSignReport karate_sign_check(const Graph& g, std::span<const int> faction);

}  // namespace infrared::spectral
