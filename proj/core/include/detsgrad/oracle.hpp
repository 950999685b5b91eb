#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <vector>

#include "detsgrad/rng.hpp"

namespace detsgrad {

// Pluggable loss/gradient provider for one agent's local empirical risk
//   f_i(w) = (1/m_i) * sum_j loss(w, sample_j)
// over its data shard. Batch operations take shard-local sample indices and
// return the mean over the batch, accumulated in the given index order.
// Implementations are read-only after construction; gradient evaluations for
// distinct agents may run concurrently.
class ObjectiveOracle {
public:
    virtual ~ObjectiveOracle() = default;

    virtual int dim() const = 0;
    virtual long shard_size() const = 0;

    virtual double loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const = 0;
    virtual void grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                         Eigen::VectorXd& out) const = 0;

    // Exact local gradient / loss over the whole shard. Equal to
    // grad_at/loss_at with the full ascending index list by construction.
    void full_gradient(const Eigen::VectorXd& w, Eigen::VectorXd& out) const;
    Eigen::VectorXd full_gradient(const Eigen::VectorXd& w) const;
    double full_loss(const Eigen::VectorXd& w) const;
};

// Stochastic gradient direction: a simple stochastic gradient, a mini-batch
// stochastic gradient, or a scaled (quasi-Newton style) mini-batch gradient.
struct GradientDirection {
    enum class Mode { single, minibatch, scaled };

    Mode mode = Mode::single;
    int batch_size = 1;
    Eigen::MatrixXd scaling;  // H, scaled mode only

    static GradientDirection single();
    static GradientDirection minibatch(int batch_size);
    // Throws InvalidScaling unless H is symmetric positive definite
    // (verified by Cholesky success).
    static GradientDirection scaled(int batch_size, Eigen::MatrixXd H);
};

// Draws one stochastic gradient g_i(w, xi) from the oracle's shard:
//   single    – gradient at one uniformly drawn sample
//   minibatch – mean gradient over batch_size draws without replacement
//   scaled    – H times the mini-batch gradient
// Batch indices are evaluated in ascending order, so an exhaustive batch
// reproduces full_gradient exactly. Throws EmptyShard on an empty shard.
void sample_stochastic_gradient(const ObjectiveOracle& oracle, const Eigen::VectorXd& w,
                                const GradientDirection& direction, RngStream& rng,
                                Eigen::VectorXd& out);

}  // namespace detsgrad
