#pragma once

// Central finite-difference gradient oracle with per-coordinate step
// h = base_h * (|w_i| + 1).

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace testsupport {

inline Eigen::VectorXd central_difference(const std::function<double(const Eigen::VectorXd&)>& f,
                                          const Eigen::VectorXd& w, double base_h = 1e-5) {
    Eigen::VectorXd g(w.size());
    Eigen::VectorXd wp = w, wm = w;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        const double h = base_h * (std::abs(w[i]) + 1.0);
        wp[i] = w[i] + h;
        wm[i] = w[i] - h;
        g[i] = (f(wp) - f(wm)) / (2.0 * h);
        wp[i] = w[i];
        wm[i] = w[i];
    }
    return g;
}

// Same, restricted to selected coordinates (for high-dimensional models).
inline void central_difference_coords(const std::function<double(const Eigen::VectorXd&)>& f,
                                      const Eigen::VectorXd& w, const std::vector<int>& coords,
                                      Eigen::VectorXd& out, double base_h = 1e-5) {
    Eigen::VectorXd wp = w, wm = w;
    out.resize(static_cast<Eigen::Index>(coords.size()));
    for (std::size_t c = 0; c < coords.size(); ++c) {
        const int i = coords[c];
        const double h = base_h * (std::abs(w[i]) + 1.0);
        wp[i] = w[i] + h;
        wm[i] = w[i] - h;
        out[static_cast<Eigen::Index>(c)] = (f(wp) - f(wm)) / (2.0 * h);
        wp[i] = w[i];
        wm[i] = w[i];
    }
}

}  // namespace testsupport
