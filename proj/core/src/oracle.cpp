#include "detsgrad/oracle.hpp"

#include <Eigen/Cholesky>
#include <numeric>

#include "detsgrad/errors.hpp"

namespace detsgrad {

namespace {
std::vector<long> all_indices(long m) {
    std::vector<long> idx(m);
    std::iota(idx.begin(), idx.end(), 0L);
    return idx;
}
}  // namespace

void ObjectiveOracle::full_gradient(const Eigen::VectorXd& w, Eigen::VectorXd& out) const {
    grad_at(w, all_indices(shard_size()), out);
}

Eigen::VectorXd ObjectiveOracle::full_gradient(const Eigen::VectorXd& w) const {
    Eigen::VectorXd g(dim());
    full_gradient(w, g);
    return g;
}

double ObjectiveOracle::full_loss(const Eigen::VectorXd& w) const {
    return loss_at(w, all_indices(shard_size()));
}

GradientDirection GradientDirection::single() { return {Mode::single, 1, {}}; }

GradientDirection GradientDirection::minibatch(int batch_size) {
    if (batch_size < 1) throw InvalidScaling("mini-batch size must be >= 1");
    return {Mode::minibatch, batch_size, {}};
}

GradientDirection GradientDirection::scaled(int batch_size, Eigen::MatrixXd H) {
    if (batch_size < 1) throw InvalidScaling("mini-batch size must be >= 1");
    if (H.rows() != H.cols()) throw InvalidScaling("scaling matrix must be square");
    if (!H.isApprox(H.transpose()))
        throw InvalidScaling("scaling matrix must be symmetric");
    Eigen::LLT<Eigen::MatrixXd> llt(H);
    if (llt.info() != Eigen::Success)
        throw InvalidScaling("scaling matrix must be positive definite (Cholesky failed)");
    return {Mode::scaled, batch_size, std::move(H)};
}

void sample_stochastic_gradient(const ObjectiveOracle& oracle, const Eigen::VectorXd& w,
                                const GradientDirection& direction, RngStream& rng,
                                Eigen::VectorXd& out) {
    const long m = oracle.shard_size();
    if (m == 0) throw EmptyShard("stochastic gradient requested from an empty shard");

    switch (direction.mode) {
        case GradientDirection::Mode::single: {
            const long idx = static_cast<long>(rng.uniform_below(static_cast<std::uint64_t>(m)));
            oracle.grad_at(w, std::span<const long>(&idx, 1), out);
            return;
        }
        case GradientDirection::Mode::minibatch: {
            const long k = std::min<long>(direction.batch_size, m);
            const auto batch = rng.sample_without_replacement(m, k);
            oracle.grad_at(w, batch, out);
            return;
        }
        case GradientDirection::Mode::scaled: {
            if (direction.scaling.rows() != oracle.dim())
                throw DimensionMismatch("scaling matrix order does not match parameter dimension");
            const long k = std::min<long>(direction.batch_size, m);
            const auto batch = rng.sample_without_replacement(m, k);
            Eigen::VectorXd g(oracle.dim());
            oracle.grad_at(w, batch, g);
            out = direction.scaling * g;
            return;
        }
    }
}

}  // namespace detsgrad
