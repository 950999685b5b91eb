#include "detsgrad/synthetic.hpp"

#include <cmath>
#include <numbers>

#include "detsgrad/errors.hpp"

namespace detsgrad {

AdditiveNoiseOracle::AdditiveNoiseOracle(int dim, long samples, double noise_scale, RngStream& rng) {
    if (dim < 1) throw ShapeMismatch("synthetic oracle needs dim >= 1");
    if (samples < 2) throw InsufficientData("synthetic oracle needs at least 2 samples");
    noise_.resize(samples);
    Eigen::VectorXd running = Eigen::VectorXd::Zero(dim);
    for (long j = 0; j + 1 < samples; ++j) {
        Eigen::VectorXd v(dim);
        for (int d = 0; d < dim; ++d) v[d] = rng.normal(0.0, noise_scale);
        running += v;  // same ascending accumulation order as grad_at
        noise_[j] = std::move(v);
    }
    // Last sample cancels the ascending partial sum, so the full-shard mean
    // noise is exactly zero and full_gradient equals the analytic gradient.
    noise_[samples - 1] = -running;
}

double AdditiveNoiseOracle::loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const {
    if (w.size() != dim()) throw DimensionMismatch("loss_at: parameter dimension mismatch");
    if (batch.empty()) throw EmptyShard("loss_at: empty batch");
    double acc = 0.0;
    for (const long j : batch) acc += noise_[j].dot(w);
    return base_loss(w) + acc / static_cast<double>(batch.size());
}

void AdditiveNoiseOracle::grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                                  Eigen::VectorXd& out) const {
    if (w.size() != dim()) throw DimensionMismatch("grad_at: parameter dimension mismatch");
    if (batch.empty()) throw EmptyShard("grad_at: empty batch");
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(dim());
    for (const long j : batch) acc += noise_[j];
    base_grad(w, out);
    out += acc / static_cast<double>(batch.size());
}

QuarticSaddleOracle::QuarticSaddleOracle(int dim, long samples, double noise_scale, RngStream& rng)
    : AdditiveNoiseOracle(dim, samples, noise_scale, rng) {
    quartic_.resize(dim);
    curvature_.resize(dim);
    for (int d = 0; d < dim; ++d) {
        quartic_[d] = rng.uniform(0.8, 1.2);
        curvature_[d] = rng.uniform(0.5, 1.5);
    }
    // Shift so the per-coordinate minima sit at zero; keeps the objective
    // lower-bounded by 0 without touching the gradient.
    offset_ = (curvature_.array().square() / (4.0 * quartic_.array())).sum();
}

double QuarticSaddleOracle::base_loss(const Eigen::VectorXd& w) const {
    const auto w2 = w.array().square();
    return (quartic_.array() * w2 * w2 / 4.0 - curvature_.array() * w2 / 2.0).sum() + offset_;
}

void QuarticSaddleOracle::base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const {
    out = (quartic_.array() * w.array().cube() - curvature_.array() * w.array()).matrix();
}

RastriginSumOracle::RastriginSumOracle(int dim, long samples, double noise_scale, RngStream& rng)
    : AdditiveNoiseOracle(dim, samples, noise_scale, rng) {
    offset_.resize(dim);
    for (int d = 0; d < dim; ++d) offset_[d] = rng.normal(0.0, 0.5);
}

double RastriginSumOracle::base_loss(const Eigen::VectorXd& w) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const auto z = (w - offset_).array();
    return (z.square() - kAmplitude * (two_pi * z).cos() + kAmplitude).sum();
}

void RastriginSumOracle::base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    const auto z = (w - offset_).array();
    out = (2.0 * z + kAmplitude * two_pi * (two_pi * z).sin()).matrix();
}

QuadraticOracle::QuadraticOracle(int dim, long samples, double noise_scale, RngStream& rng)
    : AdditiveNoiseOracle(dim, samples, noise_scale, rng) {
    center_.resize(dim);
    for (int d = 0; d < dim; ++d) center_[d] = rng.normal();
}

double QuadraticOracle::base_loss(const Eigen::VectorXd& w) const {
    return 0.5 * (w - center_).squaredNorm();
}

void QuadraticOracle::base_grad(const Eigen::VectorXd& w, Eigen::VectorXd& out) const {
    out = w - center_;
}

NonconvexRegressionOracle::NonconvexRegressionOracle(const Eigen::VectorXd& w_true,
                                                     const Eigen::VectorXd& input_mean,
                                                     long samples, RngStream& rng) {
    if (samples < 1) throw InsufficientData("regression oracle needs at least 1 sample");
    const int dim = static_cast<int>(w_true.size());
    inputs_.resize(dim, samples);
    targets_.resize(samples);
    for (long j = 0; j < samples; ++j) {
        for (int d = 0; d < dim; ++d) inputs_(d, j) = input_mean[d] + rng.normal();
        targets_[j] = std::tanh(w_true.dot(inputs_.col(j))) + rng.normal(0.0, 0.1);
    }
}

NonconvexRegressionOracle::NonconvexRegressionOracle(Eigen::MatrixXd inputs, Eigen::VectorXd targets)
    : inputs_(std::move(inputs)), targets_(std::move(targets)) {
    if (inputs_.cols() != targets_.size())
        throw ShapeMismatch("regression oracle: inputs/targets count mismatch");
}

double NonconvexRegressionOracle::loss_at(const Eigen::VectorXd& w,
                                          std::span<const long> batch) const {
    if (w.size() != dim()) throw DimensionMismatch("loss_at: parameter dimension mismatch");
    if (batch.empty()) throw EmptyShard("loss_at: empty batch");
    double acc = 0.0;
    for (const long j : batch) {
        const double r = std::tanh(w.dot(inputs_.col(j))) - targets_[j];
        acc += r * r;
    }
    return acc / static_cast<double>(batch.size());
}

void NonconvexRegressionOracle::grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                                        Eigen::VectorXd& out) const {
    if (w.size() != dim()) throw DimensionMismatch("grad_at: parameter dimension mismatch");
    if (batch.empty()) throw EmptyShard("grad_at: empty batch");
    out.setZero(dim());
    for (const long j : batch) {
        const double t = std::tanh(w.dot(inputs_.col(j)));
        out += (2.0 * (t - targets_[j]) * (1.0 - t * t)) * inputs_.col(j);
    }
    out /= static_cast<double>(batch.size());
}

std::vector<std::unique_ptr<ObjectiveOracle>> make_synthetic(const SyntheticSpec& spec,
                                                             int n_agents, std::uint64_t seed) {
    if (spec.dim < 1) throw ShapeMismatch("make_synthetic: dim must be >= 1");
    if (n_agents < 2) throw ShapeMismatch("make_synthetic: need at least 2 agents");

    bool known = spec.name == "quartic-saddle" || spec.name == "rastrigin-sum" ||
                 spec.name == "nonconvex-regression" || spec.name == "quadratic";
    if (!known) throw UnknownProblem("unknown synthetic problem \"" + spec.name + "\"");

    // Regression ground truth is shared across agents; its stream id sits
    // outside the per-agent range.
    Eigen::VectorXd w_true;
    if (spec.name == "nonconvex-regression") {
        RngStream shared(seed, n_agents, RngStream::Tag::synthetic_data);
        w_true.resize(spec.dim);
        for (int d = 0; d < spec.dim; ++d) w_true[d] = shared.normal();
    }

    std::vector<std::unique_ptr<ObjectiveOracle>> oracles;
    oracles.reserve(n_agents);
    for (int i = 0; i < n_agents; ++i) {
        RngStream rng(seed, i, RngStream::Tag::synthetic_data);
        if (spec.name == "quartic-saddle") {
            oracles.push_back(std::make_unique<QuarticSaddleOracle>(spec.dim, spec.samples_per_agent,
                                                                    spec.noise_scale, rng));
        } else if (spec.name == "rastrigin-sum") {
            oracles.push_back(std::make_unique<RastriginSumOracle>(spec.dim, spec.samples_per_agent,
                                                                   spec.noise_scale, rng));
        } else if (spec.name == "quadratic") {
            oracles.push_back(std::make_unique<QuadraticOracle>(spec.dim, spec.samples_per_agent,
                                                                spec.noise_scale, rng));
        } else {
            Eigen::VectorXd mean(spec.dim);
            for (int d = 0; d < spec.dim; ++d) mean[d] = rng.normal(0.0, 0.8);
            oracles.push_back(std::make_unique<NonconvexRegressionOracle>(
                w_true, mean, spec.samples_per_agent, rng));
        }
    }
    return oracles;
}

}  // namespace detsgrad
