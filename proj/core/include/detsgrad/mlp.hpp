#pragma once

#include <memory>
#include <string>
#include <vector>

#include "detsgrad/dataset.hpp"
#include "detsgrad/oracle.hpp"

namespace detsgrad {

enum class Activation { relu, tanh };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

// Fully connected classifier with softmax cross-entropy loss and exact
// manual backprop. Parameters are flattened into a single vector in a fixed
// documented order: layer-major, each layer's weight matrix (row-major,
// rows = outputs) followed by its bias vector. That order defines ||e_i||_1
// and the broadcast payloads network-wide.
class Mlp {
public:
    // layer_sizes = {d_in, hidden..., n_classes}; at least 2 entries.
    Mlp(std::vector<int> layer_sizes, Activation activation);

    int param_count() const { return param_count_; }
    int input_dim() const { return layers_.front(); }
    int n_classes() const { return layers_.back(); }
    const std::vector<int>& layer_sizes() const { return layers_; }
    Activation activation() const { return activation_; }

    // Glorot-style uniform fan-based weight initialization, zero biases.
    Eigen::VectorXd init_params(RngStream& rng) const;

    // Mean softmax cross-entropy over the batch (columns of `inputs`).
    double loss(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs,
                const std::vector<int>& labels) const;

    // Mean loss and, when grad is non-null, mean gradient over the batch.
    double loss_and_grad(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs,
                         const std::vector<int>& labels, Eigen::VectorXd* grad) const;

    // Argmax class predictions for the batch.
    std::vector<int> predict(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs) const;

private:
    friend class MlpOracle;
    void check_params(const Eigen::VectorXd& w) const;

    std::vector<int> layers_;
    Activation activation_;
    int param_count_ = 0;
    std::vector<int> weight_offsets_;
    std::vector<int> bias_offsets_;
};

// Binds an Mlp to a shard of a dataset; shard entries are dataset row ids.
class MlpOracle final : public ObjectiveOracle {
public:
    MlpOracle(std::shared_ptr<const Mlp> model, std::shared_ptr<const Dataset> data,
              std::vector<long> shard);

    int dim() const override { return model_->param_count(); }
    long shard_size() const override { return static_cast<long>(shard_.size()); }
    double loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const override;
    void grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                 Eigen::VectorXd& out) const override;

    const std::vector<long>& shard() const { return shard_; }
    const Mlp& model() const { return *model_; }

private:
    void gather(std::span<const long> batch, Eigen::MatrixXd& X, std::vector<int>& y) const;

    std::shared_ptr<const Mlp> model_;
    std::shared_ptr<const Dataset> data_;
    std::vector<long> shard_;
};

// Validates shapes (>= 2 layers, input size = feature dimension when a
// dataset is supplied later via MlpOracle, output size = class count).
std::shared_ptr<const Mlp> make_mlp_classifier(const std::vector<int>& layer_sizes,
                                               Activation activation);

}  // namespace detsgrad
