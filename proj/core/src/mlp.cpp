#include "detsgrad/mlp.hpp"

#include <cmath>

#include "detsgrad/errors.hpp"

namespace detsgrad {

namespace {
using RowMajorMap = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
using RowMajorMutMap = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>;
constexpr long kBatchChunk = 1024;
}  // namespace

Activation activation_from_string(const std::string& name) {
    if (name == "relu") return Activation::relu;
    if (name == "tanh") return Activation::tanh;
    throw ConfigInvalid("unknown activation \"" + name + "\" (expected relu or tanh)");
}

std::string to_string(Activation a) { return a == Activation::relu ? "relu" : "tanh"; }

Mlp::Mlp(std::vector<int> layer_sizes, Activation activation)
    : layers_(std::move(layer_sizes)), activation_(activation) {
    if (layers_.size() < 2) throw ShapeMismatch("MLP needs at least an input and an output layer");
    for (const int s : layers_)
        if (s < 1) throw ShapeMismatch("MLP layer sizes must be positive");

    int offset = 0;
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        weight_offsets_.push_back(offset);
        offset += layers_[l + 1] * layers_[l];
        bias_offsets_.push_back(offset);
        offset += layers_[l + 1];
    }
    param_count_ = offset;
}

void Mlp::check_params(const Eigen::VectorXd& w) const {
    if (w.size() != param_count_)
        throw ShapeMismatch("parameter vector has " + std::to_string(w.size()) + " entries, model needs " +
                            std::to_string(param_count_));
}

Eigen::VectorXd Mlp::init_params(RngStream& rng) const {
    Eigen::VectorXd w = Eigen::VectorXd::Zero(param_count_);
    for (std::size_t l = 0; l + 1 < layers_.size(); ++l) {
        const int fan_in = layers_[l];
        const int fan_out = layers_[l + 1];
        const double limit = std::sqrt(6.0 / (fan_in + fan_out));
        double* dst = w.data() + weight_offsets_[l];
        for (int i = 0; i < fan_out * fan_in; ++i) dst[i] = rng.uniform(-limit, limit);
        // biases stay zero
    }
    return w;
}

double Mlp::loss(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs,
                 const std::vector<int>& labels) const {
    return loss_and_grad(w, inputs, labels, nullptr);
}

double Mlp::loss_and_grad(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs,
                          const std::vector<int>& labels, Eigen::VectorXd* grad) const {
    check_params(w);
    if (inputs.rows() != input_dim())
        throw ShapeMismatch("batch feature dimension " + std::to_string(inputs.rows()) +
                            " does not match model input " + std::to_string(input_dim()));
    const long batch = inputs.cols();
    if (batch == 0) throw EmptyShard("empty batch");
    if (static_cast<long>(labels.size()) != batch)
        throw ShapeMismatch("labels/batch size mismatch");
    if (grad != nullptr) grad->setZero(param_count_);

    const std::size_t n_layers = layers_.size() - 1;
    double loss_sum = 0.0;

    // Chunked so full-shard evaluations stay within a fixed memory budget.
    // Accumulation is linear in ascending chunk order.
    for (long start = 0; start < batch; start += kBatchChunk) {
        const long bs = std::min(kBatchChunk, batch - start);
        std::vector<Eigen::MatrixXd> acts;  // post-activation per layer
        acts.reserve(n_layers + 1);
        acts.push_back(inputs.middleCols(start, bs));
        std::vector<Eigen::MatrixXd> preacts(n_layers);

        for (std::size_t l = 0; l < n_layers; ++l) {
            RowMajorMap W(w.data() + weight_offsets_[l], layers_[l + 1], layers_[l]);
            Eigen::Map<const Eigen::VectorXd> bvec(w.data() + bias_offsets_[l], layers_[l + 1]);
            preacts[l] = (W * acts.back()).colwise() + bvec;
            if (l + 1 == n_layers) break;  // logits stay linear
            if (activation_ == Activation::relu)
                acts.push_back(preacts[l].cwiseMax(0.0));
            else
                acts.push_back(preacts[l].array().tanh().matrix());
        }

        // Softmax cross-entropy, log-sum-exp stabilized.
        const Eigen::MatrixXd& logits = preacts[n_layers - 1];
        Eigen::MatrixXd delta(logits.rows(), bs);  // becomes (softmax - onehot)/batch
        for (long c = 0; c < bs; ++c) {
            const int label = labels[start + c];
            if (label < 0 || label >= n_classes())
                throw ShapeMismatch("label " + std::to_string(label) + " outside model class range");
            const double mx = logits.col(c).maxCoeff();
            const Eigen::ArrayXd ex = (logits.col(c).array() - mx).exp();
            const double Z = ex.sum();
            loss_sum += std::log(Z) + mx - logits(label, c);
            delta.col(c) = (ex / Z).matrix();
            delta(label, c) -= 1.0;
        }
        delta /= static_cast<double>(batch);

        // Backprop through the chunk; gradients accumulate into `grad`.
        if (grad != nullptr) {
            Eigen::MatrixXd d = std::move(delta);
            for (std::size_t l = n_layers; l-- > 0;) {
                RowMajorMutMap dW(grad->data() + weight_offsets_[l], layers_[l + 1], layers_[l]);
                Eigen::Map<Eigen::VectorXd> db(grad->data() + bias_offsets_[l], layers_[l + 1]);
                dW.noalias() += d * acts[l].transpose();
                db.noalias() += d.rowwise().sum();
                if (l == 0) break;
                RowMajorMap W(w.data() + weight_offsets_[l], layers_[l + 1], layers_[l]);
                Eigen::MatrixXd back = W.transpose() * d;
                if (activation_ == Activation::relu)
                    d = (preacts[l - 1].array() > 0.0).select(back, 0.0);
                else
                    d = (back.array() * (1.0 - acts[l].array().square())).matrix();
            }
        }
    }
    return loss_sum / static_cast<double>(batch);
}

std::vector<int> Mlp::predict(const Eigen::VectorXd& w, const Eigen::MatrixXd& inputs) const {
    check_params(w);
    if (inputs.rows() != input_dim()) throw ShapeMismatch("predict: feature dimension mismatch");
    const long batch = inputs.cols();
    std::vector<int> out(batch);
    const std::size_t n_layers = layers_.size() - 1;
    for (long start = 0; start < batch; start += kBatchChunk) {
        const long bs = std::min(kBatchChunk, batch - start);
        Eigen::MatrixXd a = inputs.middleCols(start, bs);
        for (std::size_t l = 0; l < n_layers; ++l) {
            RowMajorMap W(w.data() + weight_offsets_[l], layers_[l + 1], layers_[l]);
            Eigen::Map<const Eigen::VectorXd> bvec(w.data() + bias_offsets_[l], layers_[l + 1]);
            Eigen::MatrixXd z = (W * a).colwise() + bvec;
            if (l + 1 == n_layers) {
                a = std::move(z);
            } else if (activation_ == Activation::relu) {
                a = z.cwiseMax(0.0);
            } else {
                a = z.array().tanh().matrix();
            }
        }
        for (long c = 0; c < bs; ++c) {
            Eigen::Index best;
            a.col(c).maxCoeff(&best);
            out[start + c] = static_cast<int>(best);
        }
    }
    return out;
}

MlpOracle::MlpOracle(std::shared_ptr<const Mlp> model, std::shared_ptr<const Dataset> data,
                     std::vector<long> shard)
    : model_(std::move(model)), data_(std::move(data)), shard_(std::move(shard)) {
    if (data_->feature_dim() != model_->input_dim())
        throw ShapeMismatch("dataset feature dimension " + std::to_string(data_->feature_dim()) +
                            " does not match model input " + std::to_string(model_->input_dim()));
    if (data_->class_count() > model_->n_classes())
        throw ShapeMismatch("dataset has more classes than the model output");
    for (const long i : shard_)
        if (i < 0 || i >= data_->count) throw ShapeMismatch("shard index out of dataset range");
}

void MlpOracle::gather(std::span<const long> batch, Eigen::MatrixXd& X, std::vector<int>& y) const {
    const int d = data_->feature_dim();
    X.resize(d, static_cast<long>(batch.size()));
    y.resize(batch.size());
    for (std::size_t c = 0; c < batch.size(); ++c) {
        const long row = shard_[batch[c]];
        const float* px = data_->sample(row);
        for (int r = 0; r < d; ++r) X(r, static_cast<long>(c)) = static_cast<double>(px[r]);
        y[c] = data_->labels[row];
    }
}

double MlpOracle::loss_at(const Eigen::VectorXd& w, std::span<const long> batch) const {
    if (batch.empty()) throw EmptyShard("loss_at: empty batch");
    Eigen::MatrixXd X;
    std::vector<int> y;
    gather(batch, X, y);
    return model_->loss(w, X, y);
}

void MlpOracle::grad_at(const Eigen::VectorXd& w, std::span<const long> batch,
                        Eigen::VectorXd& out) const {
    if (batch.empty()) throw EmptyShard("grad_at: empty batch");
    Eigen::MatrixXd X;
    std::vector<int> y;
    gather(batch, X, y);
    model_->loss_and_grad(w, X, y, &out);
}

std::shared_ptr<const Mlp> make_mlp_classifier(const std::vector<int>& layer_sizes,
                                               Activation activation) {
    return std::make_shared<const Mlp>(layer_sizes, activation);
}

}  // namespace detsgrad
