#include "infrared/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "infrared/errors.hpp"
#include "infrared/metrics.hpp"

namespace infrared::spectral {

Eigen::MatrixXd laplacian_tau(const Graph& g, double tau, double epsilon) {
    const NodeId n = g.num_nodes();
    if (n > kDenseNodeCap) {
        throw InputError("graph has " + std::to_string(n) + " nodes; the dense spectral path is capped at " +
                         std::to_string(kDenseNodeCap) + " (use the sparse partitioning pipeline instead)");
    }
    const CorrectedDegrees cd = corrected_degrees(g, tau, epsilon);
    Eigen::MatrixXd lap = Eigen::MatrixXd::Identity(n, n);
    for (NodeId i = 0; i < n; ++i) {
        for (NodeId j : g.neighbors(i)) lap(i, j) = -cd.inv_sqrt[i] * cd.inv_sqrt[j];
    }
    return lap;
}

Interval gershgorin_interval(const Graph& g, double tau, double epsilon) {
    const CorrectedDegrees cd = corrected_degrees(g, tau, epsilon);
    double radius = 0.0;
    for (NodeId i = 0; i < g.num_nodes(); ++i) radius = std::max(radius, g.degree(i) / cd.values[i]);
    return {1.0 - radius, 1.0 + radius};
}

SpectrumReport spectrum(const Graph& g, double tau, double epsilon, double zero_tol) {
    const Eigen::MatrixXd lap = laplacian_tau(g, tau, epsilon);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(lap);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver did not converge");

    SpectrumReport r;
    r.tau = tau;
    const auto& values = solver.eigenvalues();
    r.eigenvalues.assign(values.data(), values.data() + values.size());
    r.eigenvectors = solver.eigenvectors();
    for (Eigen::Index s = 0; s < r.eigenvectors.cols(); ++s) {
        Eigen::Index arg = 0;
        r.eigenvectors.col(s).cwiseAbs().maxCoeff(&arg);
        if (r.eigenvectors(arg, s) < 0.0) r.eigenvectors.col(s) *= -1.0;
    }
    for (double lambda : r.eigenvalues) {
        r.num_infrared += lambda < -zero_tol;
        r.num_ultraviolet += lambda > 2.0 + zero_tol;
    }
    r.gershgorin = gershgorin_interval(g, tau, epsilon);
    return r;
}

double max_eigen_residual(const Eigen::MatrixXd& laplacian, const SpectrumReport& report) {
    double worst = 0.0;
    for (Eigen::Index s = 0; s < report.eigenvectors.cols(); ++s) {
        const Eigen::VectorXd u = report.eigenvectors.col(s);
        worst = std::max(worst, (laplacian * u - report.eigenvalues[static_cast<std::size_t>(s)] * u).norm());
    }
    return worst;
}

KarateSignReport karate_sign_check(const Graph& g, std::span<const int> faction) {
    if (g.num_nodes() != 34 || g.num_edges() != 78) {
        throw InputError("karate sign check expects the 34-node, 78-edge karate club graph");
    }
    if (faction.size() != 34) throw InputError("karate sign check needs one faction label per node");
    const SpectrumReport r = spectrum(g, 0.0);
    const auto& u = r.eigenvectors;
    const Eigen::Index last = u.cols() - 1;

    KarateSignReport out;
    const bool all_pos = (u.col(0).array() > 0.0).all();
    const bool all_neg = (u.col(0).array() < 0.0).all();
    out.zero_mode_single_sign = all_pos || all_neg;

    std::vector<int> sign1(34);
    const int reference = faction[0];
    std::size_t agree = 0;
    for (int i = 0; i < 34; ++i) {
        sign1[i] = u(i, 1) > 0.0 ? 1 : 0;
        agree += (sign1[i] == 1) == (faction[i] == reference);
    }
    out.low_mode_agreement = std::max(agree, 34 - agree) / 34.0;
    out.low_mode_ari = ari(faction, sign1);
    out.high_mode_node34 = u(33, last);
    out.high_mode_node23 = u(22, last);
    for (const auto& [a, b] : g.edge_list()) {
        if (faction[a] != faction[b]) continue;
        out.high_mode_same_block_flips += (u(a, last) > 0.0) != (u(b, last) > 0.0);
        out.low_mode_same_block_flips += (u(a, 1) > 0.0) != (u(b, 1) > 0.0);
    }
    return out;
}

}  // namespace infrared::spectral
