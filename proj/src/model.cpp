#include "finlstm/model.hpp"

#include "finlstm/errors.hpp"

namespace finlstm {

void ModelConfig::validate() const {
    if (input_dim == 0 || num_lstm_layers == 0 || hidden_dim == 0 || output_dim == 0) {
        throw ContractError("ModelConfig: all dimensions must be positive");
    }
}

Model Model::zeros(const ModelConfig& config) {
    config.validate();
    Model m;
    m.config = config;
    std::size_t in = config.input_dim;
    for (std::size_t k = 0; k < config.num_lstm_layers; ++k) {
        m.lstm_layers.push_back(LstmParams::zeros(in, config.hidden_dim));
        in = config.hidden_dim;
    }
    m.dense = DenseParams::zeros(config.hidden_dim, config.output_dim);
    return m;
}

void Model::validate() const {
    config.validate();
    if (lstm_layers.size() != config.num_lstm_layers) {
        throw ContractError("Model: expected " + std::to_string(config.num_lstm_layers) +
                            " LSTM layers, found " + std::to_string(lstm_layers.size()));
    }
    std::size_t in = config.input_dim;
    for (const auto& layer : lstm_layers) {
        if (layer.input_dim != in || layer.hidden_dim != config.hidden_dim) {
            throw ContractError("Model: layer dimension chain broken");
        }
        layer.validate();
        in = config.hidden_dim;
    }
    dense.validate();
    if (dense.w.rows() != config.output_dim || dense.w.cols() != config.hidden_dim) {
        throw ContractError("Model: dense layer has shape " + shape_string(dense.w) +
                            ", expected " + std::to_string(config.output_dim) + "x" +
                            std::to_string(config.hidden_dim));
    }
}

std::size_t parameter_count(const ModelConfig& config) {
    config.validate();
    const std::size_t h = config.hidden_dim;
    std::size_t total = 0;
    std::size_t in = config.input_dim;
    for (std::size_t k = 0; k < config.num_lstm_layers; ++k) {
        total += 4 * (h * in + h * h + h);
        in = h;
    }
    total += config.output_dim * h + config.output_dim;
    return total;
}

ModelForward model_forward(const Model& m, const Matrix& x) {
    m.validate();
    if (x.empty()) throw ContractError("model_forward: input sequence is empty");
    if (x.cols() != m.config.input_dim) {
        throw ContractError("model_forward: input rows have width " + std::to_string(x.cols()) +
                            ", expected " + std::to_string(m.config.input_dim));
    }

    ModelForward fwd;
    fwd.traces.reserve(m.lstm_layers.size());
    const Matrix* layer_input = &x;
    for (const auto& layer : m.lstm_layers) {
        fwd.traces.push_back(lstm_forward(layer, *layer_input));
        layer_input = &fwd.traces.back().y;
    }

    const Matrix& top = fwd.traces.back().y;
    fwd.predictions = Matrix(top.rows(), m.config.output_dim);
    for (std::size_t t = 0; t < top.rows(); ++t) {
        const auto pred = dense_forward(m.dense, top.row(t));
        auto row = fwd.predictions.row(t);
        std::copy(pred.begin(), pred.end(), row.begin());
    }
    return fwd;
}

LossResult mse_loss(const Matrix& preds, const Matrix& targets) {
    if (preds.rows() != targets.rows() || preds.cols() != targets.cols()) {
        throw ContractError("mse_loss: shapes differ, " + shape_string(preds) + " vs " +
                            shape_string(targets));
    }
    if (preds.empty()) throw ContractError("mse_loss: empty inputs");

    const double n = static_cast<double>(preds.size());
    LossResult result;
    result.dpreds = Matrix(preds.rows(), preds.cols());
    double sum = 0.0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        const double diff = preds.values()[k] - targets.values()[k];
        sum += diff * diff;
        result.dpreds.values()[k] = (2.0 * diff) / n;
    }
    result.loss = sum / n;
    return result;
}

ModelGrads ModelGrads::zeros_like(const Model& m) {
    ModelGrads g;
    for (const auto& layer : m.lstm_layers) g.lstm_layers.push_back(LstmGrads::zeros_like(layer));
    g.dense.w = Matrix(m.dense.w.rows(), m.dense.w.cols());
    g.dense.b.assign(m.dense.b.size(), 0.0);
    return g;
}

GradientResult model_gradients(const Model& m, const Matrix& x, const Matrix& targets) {
    ModelForward fwd = model_forward(m, x);
    if (targets.rows() != fwd.predictions.rows() || targets.cols() != fwd.predictions.cols()) {
        throw ContractError("model_gradients: targets have shape " + shape_string(targets) +
                            ", expected " + shape_string(fwd.predictions));
    }

    GradientResult result;
    result.grads = ModelGrads::zeros_like(m);
    LossResult loss = mse_loss(fwd.predictions, targets);
    result.loss = loss.loss;

    // Dense gradients accumulate across timesteps; dh rows seed the top
    // layer's upstream gradient.
    const Matrix& top = fwd.traces.back().y;
    Matrix d_layer(top.rows(), top.cols());
    for (std::size_t t = 0; t < top.rows(); ++t) {
        DenseBackwardResult db = dense_backward(m.dense, top.row(t), loss.dpreds.row(t));
        for (std::size_t k = 0; k < db.grads.w.size(); ++k) {
            result.grads.dense.w.values()[k] += db.grads.w.values()[k];
        }
        for (std::size_t k = 0; k < db.grads.b.size(); ++k) {
            result.grads.dense.b[k] += db.grads.b[k];
        }
        auto row = d_layer.row(t);
        std::copy(db.dh.begin(), db.dh.end(), row.begin());
    }

    for (std::size_t k = m.lstm_layers.size(); k-- > 0;) {
        LstmBackwardResult lb = lstm_backward(m.lstm_layers[k], fwd.traces[k], d_layer);
        result.grads.lstm_layers[k] = std::move(lb.grads);
        d_layer = std::move(lb.dx);
    }
    return result;
}

std::vector<TensorRef> tensor_refs(Model& m) {
    std::vector<TensorRef> refs;
    visit_tensors(m, [&](const std::string& name, std::size_t rows, std::size_t cols, auto& v) {
        refs.push_back({name, rows, cols, std::span<double>(v)});
    });
    return refs;
}

std::vector<ConstTensorRef> tensor_refs(const Model& m) {
    std::vector<ConstTensorRef> refs;
    visit_tensors(m, [&](const std::string& name, std::size_t rows, std::size_t cols, auto& v) {
        refs.push_back({name, rows, cols, std::span<const double>(v)});
    });
    return refs;
}

std::vector<TensorRef> tensor_refs(ModelGrads& g) {
    std::vector<TensorRef> refs;
    visit_tensors(g, [&](const std::string& name, std::size_t rows, std::size_t cols, auto& v) {
        refs.push_back({name, rows, cols, std::span<double>(v)});
    });
    return refs;
}

std::vector<ConstTensorRef> tensor_refs(const ModelGrads& g) {
    std::vector<ConstTensorRef> refs;
    visit_tensors(g, [&](const std::string& name, std::size_t rows, std::size_t cols, auto& v) {
        refs.push_back({name, rows, cols, std::span<const double>(v)});
    });
    return refs;
}

void add_grads(ModelGrads& acc, const ModelGrads& other) {
    auto dst = tensor_refs(acc);
    auto src = tensor_refs(other);
    if (dst.size() != src.size()) throw ContractError("add_grads: tensor count mismatch");
    for (std::size_t i = 0; i < dst.size(); ++i) {
        if (dst[i].values.size() != src[i].values.size()) {
            throw ContractError("add_grads: tensor " + dst[i].name + " size mismatch");
        }
        for (std::size_t k = 0; k < dst[i].values.size(); ++k) {
            dst[i].values[k] += src[i].values[k];
        }
    }
}

void scale_grads(ModelGrads& g, double factor) {
    for (auto& ref : tensor_refs(g)) {
        for (double& v : ref.values) v *= factor;
    }
}

}  // namespace finlstm
