#pragma once

#include <Eigen/Dense>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace detsgrad {

struct SpectralQuantities {
    double lambda2 = 0.0;    // smallest non-zero Laplacian eigenvalue
    double sigma_max = 0.0;  // largest Laplacian eigenvalue (= largest singular value, L is PSD)
};

// lambda2 above this declares the graph connected. Integer-weighted Laplacians
// have well-separated spectra; the tolerance guards float noise only.
inline constexpr double kConnectivityTol = 1e-9;

// Eigensolver switch-over: dense symmetric eigendecomposition up to this
// order, deflated power iteration above it.
inline constexpr int kDenseSpectrumLimit = 512;

// Computes (lambda2, sigma_max) of a symmetric zero-row-sum Laplacian.
// Throws NumericalFailure if the eigensolver does not converge.
SpectralQuantities spectral_quantities(const Eigen::MatrixXd& laplacian);

// Undirected, unweighted, connected communication graph. Immutable after
// construction; safe to share read-only across concurrent agent workers.
class GraphTopology {
public:
    static GraphTopology ring(int n);
    static GraphTopology complete(int n);
    static GraphTopology path(int n);

    // Node count inferred as max endpoint + 1 unless n >= 0 is given.
    // Rejects self-loops, duplicate edges (in either orientation), and
    // out-of-range endpoints with InvalidEdge; disconnected graphs with
    // DisconnectedGraph.
    static GraphTopology from_edges(std::vector<std::pair<int, int>> edges, int n = -1);

    // Edge-list text file: one "i j" pair per line, 0-indexed. Blank lines
    // and lines starting with '#' are skipped.
    static GraphTopology from_edge_list_file(const std::filesystem::path& file);

    int size() const { return n_; }
    const Eigen::MatrixXd& adjacency() const { return adjacency_; }
    const Eigen::MatrixXd& laplacian() const { return laplacian_; }
    double lambda2() const { return spectral_.lambda2; }
    double sigma_max() const { return spectral_.sigma_max; }

    // Neighbor lists in ascending node order (deterministic iteration).
    const std::vector<int>& neighbors(int i) const { return neighbors_[i]; }
    // Each undirected edge once, (i, j) with i < j.
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    long edge_count() const { return static_cast<long>(edges_.size()); }

    // x^T L x for an n-vector x.
    double quadratic_form(const Eigen::VectorXd& x) const;

    std::string describe() const;  // e.g. "ring(10)"

private:
    GraphTopology(int n, std::vector<std::pair<int, int>> edges, std::string description);

    int n_ = 0;
    Eigen::MatrixXd adjacency_;
    Eigen::MatrixXd laplacian_;
    SpectralQuantities spectral_;
    std::vector<std::vector<int>> neighbors_;
    std::vector<std::pair<int, int>> edges_;
    std::string description_;
};

}  // namespace detsgrad
