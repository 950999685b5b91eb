#include "detsgrad/graph.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "detsgrad/errors.hpp"
#include "detsgrad/rng.hpp"

namespace detsgrad {

namespace {

// Largest eigenvalue of the PSD matrix B restricted to the orthogonal
// complement of `deflate` (pass an empty vector for no deflation).
// Power iteration with a Rayleigh-quotient estimate; the quotient error is
// quadratic in the residual, so a 1e-7 residual gives ~1e-14 eigenvalue error.
double power_iteration_max(const Eigen::MatrixXd& B, const Eigen::VectorXd& deflate) {
    const auto n = B.rows();
    RngStream rng(0x9E3779B97F4A7C15ULL, 0, RngStream::Tag::analysis);
    Eigen::VectorXd x(n);
    for (Eigen::Index i = 0; i < n; ++i) x[i] = rng.normal();
    if (deflate.size() > 0) x -= deflate * (deflate.dot(x));
    double nx = x.norm();
    if (nx == 0.0) throw NumericalFailure("power iteration: degenerate start vector");
    x /= nx;

    const double scale = std::max(1.0, B.cwiseAbs().rowwise().sum().maxCoeff());
    double rho = 0.0;
    const long max_iters = 500000;
    for (long it = 0; it < max_iters; ++it) {
        Eigen::VectorXd y = B * x;
        if (deflate.size() > 0) y -= deflate * (deflate.dot(y));
        rho = x.dot(y);
        const double residual = (y - rho * x).norm();
        if (residual <= 1e-9 * scale) return rho;
        const double ny = y.norm();
        if (ny <= 1e-300) return 0.0;  // B annihilates the deflated subspace
        x = y / ny;
    }
    throw NumericalFailure("power iteration did not converge within 500000 steps");
}

SpectralQuantities spectral_iterative(const Eigen::MatrixXd& L) {
    const auto n = L.rows();
    SpectralQuantities out;
    out.sigma_max = power_iteration_max(L, Eigen::VectorXd());
    // Shift-and-deflate: eigenvalues of sigma_max*I - L are sigma_max - lambda_i,
    // and deflating the all-ones kernel direction leaves sigma_max - lambda2 on top.
    Eigen::MatrixXd B = -L;
    B.diagonal().array() += out.sigma_max;
    Eigen::VectorXd ones = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    out.lambda2 = out.sigma_max - power_iteration_max(B, ones);
    return out;
}

}  // namespace

SpectralQuantities spectral_quantities(const Eigen::MatrixXd& laplacian) {
    if (laplacian.rows() != laplacian.cols())
        throw DimensionMismatch("laplacian must be square");
    if (laplacian.rows() > kDenseSpectrumLimit) return spectral_iterative(laplacian);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(laplacian);
    if (solver.info() != Eigen::Success)
        throw NumericalFailure("dense symmetric eigensolver did not converge");
    const auto& ev = solver.eigenvalues();
    SpectralQuantities out;
    out.lambda2 = ev[std::min<Eigen::Index>(1, ev.size() - 1)];
    out.sigma_max = ev[ev.size() - 1];
    return out;
}

GraphTopology::GraphTopology(int n, std::vector<std::pair<int, int>> edges, std::string description)
    : n_(n), edges_(std::move(edges)), description_(std::move(description)) {
    if (n_ < 2) throw InvalidEdge("graph needs at least 2 nodes, got " + std::to_string(n_));

    adjacency_ = Eigen::MatrixXd::Zero(n_, n_);
    std::set<std::pair<int, int>> seen;
    for (auto& [i, j] : edges_) {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw InvalidEdge("edge (" + std::to_string(i) + "," + std::to_string(j) +
                              ") endpoint out of range for n=" + std::to_string(n_));
        if (i == j) throw InvalidEdge("self-loop at node " + std::to_string(i));
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second)
            throw InvalidEdge("duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
        adjacency_(i, j) = 1.0;
        adjacency_(j, i) = 1.0;
    }
    std::sort(edges_.begin(), edges_.end());

    laplacian_ = Eigen::MatrixXd(adjacency_.rowwise().sum().asDiagonal()) - adjacency_;
    spectral_ = spectral_quantities(laplacian_);
    if (spectral_.lambda2 <= kConnectivityTol)
        throw DisconnectedGraph(description_ + ": lambda2 = " + std::to_string(spectral_.lambda2) +
                                " below connectivity tolerance");

    neighbors_.resize(n_);
    for (const auto& [i, j] : edges_) {
        neighbors_[i].push_back(j);
        neighbors_[j].push_back(i);
    }
    for (auto& nb : neighbors_) std::sort(nb.begin(), nb.end());
}

GraphTopology GraphTopology::ring(int n) {
    if (n < 3) throw InvalidEdge("ring needs n >= 3, got " + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return GraphTopology(n, std::move(edges), "ring(" + std::to_string(n) + ")");
}

GraphTopology GraphTopology::complete(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return GraphTopology(n, std::move(edges), "complete(" + std::to_string(n) + ")");
}

GraphTopology GraphTopology::path(int n) {
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
    return GraphTopology(n, std::move(edges), "path(" + std::to_string(n) + ")");
}

GraphTopology GraphTopology::from_edges(std::vector<std::pair<int, int>> edges, int n) {
    if (n < 0) {
        int max_node = -1;
        for (const auto& [i, j] : edges) max_node = std::max({max_node, i, j});
        n = max_node + 1;
    }
    return GraphTopology(n, std::move(edges), "custom(n=" + std::to_string(n) + ")");
}

GraphTopology GraphTopology::from_edge_list_file(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw DataError("cannot open edge list file " + file.string());
    std::vector<std::pair<int, int>> edges;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        std::istringstream ls(line);
        long i, j;
        if (!(ls >> i >> j))
            throw InvalidEdge(file.string() + ":" + std::to_string(line_no) + ": expected \"i j\" pair");
        edges.emplace_back(static_cast<int>(i), static_cast<int>(j));
    }
    return from_edges(std::move(edges));
}

double GraphTopology::quadratic_form(const Eigen::VectorXd& x) const {
    if (x.size() != n_)
        throw DimensionMismatch("quadratic_form: vector has length " + std::to_string(x.size()) +
                                ", graph has " + std::to_string(n_) + " nodes");
    return x.dot(laplacian_ * x);
}

std::string GraphTopology::describe() const { return description_; }

}  // namespace detsgrad
