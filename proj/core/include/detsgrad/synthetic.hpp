#pragma once

#include <memory>
#include <string>
#include <vector>

#include "detsgrad/oracle.hpp"

namespace detsgrad {

// Desk-scale objectives with analytic gradients. Every oracle has Lipschitz
// gradients on the trajectory region and a lower-bounded sum, and carries a
// shard of "samples" so the stochastic machinery applies uniformly:
//
//   rastrigin-sum        sum_d [(w_d - o_d)^2 - A cos(2 pi (w_d - o_d)) + A],
//                        agent-specific offsets o
//   quartic-saddle       sum_d [q_d w_d^4 / 4 - c_d w_d^2 / 2], critical point
//                        at the origin, agent-specific coefficients
//   nonconvex-regression squared error of tanh(w.x) on agent-local data drawn
//                        around agent-specific input means (heterogeneous
//                        local minimizers)
//   quadratic            ||w - center||^2 / 2 with agent-specific centers;
//                        the convex sanity case with unit curvature
//
// For the first two, sample j contributes loss base(w) + noise_j . w, with
// shard noise vectors that cancel exactly in ascending-order accumulation, so
// the full-shard gradient equals the analytic gradient of the base function
// bit-for-bit and single-sample gradients are unbiased with bounded variance.

class AdditiveNoiseOracle : public ObjectiveOracle {
public:
    int dim() const override { return static_cast<int>(noise_[0].size()); }
    long shard_size() const override { return static_cast<long>(noise_.size()); }
    double loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const override;
    void grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                 Eigen::VectorXd& out) const override;

protected:
    AdditiveNoiseOracle(int dim, long samples, double noise_scale, RngStream& rng);

    virtual double base_loss(const Eigen::VectorXd& w) const = 0;
    virtual void base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const = 0;

private:
    std::vector<Eigen::VectorXd> noise_;
};

class QuarticSaddleOracle final : public AdditiveNoiseOracle {
public:
    QuarticSaddleOracle(int dim, long samples, double noise_scale, RngStream& rng);

    const Eigen::VectorXd& quartic_coeff() const { return quartic_; }
    const Eigen::VectorXd& curvature_coeff() const { return curvature_; }

private:
    double base_loss(const Eigen::VectorXd& w) const override;
    void base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const override;

    Eigen::VectorXd quartic_;    // q_d > 0
    Eigen::VectorXd curvature_;  // c_d > 0
    double offset_ = 0.0;        // lifts the minimum to zero
};

class RastriginSumOracle final : public AdditiveNoiseOracle {
public:
    RastriginSumOracle(int dim, long samples, double noise_scale, RngStream& rng);

private:
    double base_loss(const Eigen::VectorXd& w) const override;
    void base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const override;

    Eigen::VectorXd offset_;
    static constexpr double kAmplitude = 10.0;
};

class QuadraticOracle final : public AdditiveNoiseOracle {
public:
    QuadraticOracle(int dim, long samples, double noise_scale, RngStream& rng);

    const Eigen::VectorXd& center() const { return center_; }

private:
    double base_loss(const Eigen::VectorXd& w) const override;
    void base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const override;

    Eigen::VectorXd center_;
};

class NonconvexRegressionOracle final : public ObjectiveOracle {
public:
    // Generates `samples` pairs (x, y) with x ~ N(input_mean, I) and
    // y = tanh(w_true . x) + label noise.
    NonconvexRegressionOracle(const Eigen::VectorXd& w_true, const Eigen::VectorXd& input_mean,
                              long samples, RngStream& rng);
    // Binds existing data (used to build agents with identical shards).
    NonconvexRegressionOracle(Eigen::MatrixXd inputs, Eigen::VectorXd targets);

    int dim() const override { return static_cast<int>(inputs_.rows()); }
    long shard_size() const override { return targets_.size(); }
    double loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const override;
    void grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                 Eigen::VectorXd& out) const override;

    const Eigen::MatrixXd& inputs() const { return inputs_; }
    const Eigen::VectorXd& targets() const { return targets_; }

private:
    Eigen::MatrixXd inputs_;  // dim x samples
    Eigen::VectorXd targets_;
};

struct SyntheticSpec {
    std::string name = "quartic-saddle";  // rastrigin-sum | quartic-saddle | nonconvex-regression
    int dim = 16;
    long samples_per_agent = 64;
    double noise_scale = 0.5;
};

// One oracle per agent, seeded from (seed, agent_id). The sum of the local
// objectives has a known analytic gradient. Throws UnknownProblem for an
// unrecognized name.
std::vector<std::unique_ptr<ObjectiveOracle>> make_synthetic(const SyntheticSpec& spec,
                                                             int n_agents, std::uint64_t seed);

}  // namespace detsgrad
