#include "finlstm/optim.hpp"

#include <cmath>

#include "finlstm/errors.hpp"

namespace finlstm {

AdamState::AdamState(const Model& model, const AdamConfig& cfg) : cfg_(cfg) {
    for (const auto& ref : tensor_refs(model)) {
        m_.emplace_back(ref.values.size(), 0.0);
        v_.emplace_back(ref.values.size(), 0.0);
    }
}

AdamState::AdamState(AdamConfig cfg, std::uint64_t step_count,
                     std::vector<std::vector<double>> first_moments,
                     std::vector<std::vector<double>> second_moments)
    : cfg_(cfg), step_(step_count), m_(std::move(first_moments)), v_(std::move(second_moments)) {
    if (m_.size() != v_.size()) {
        throw ContractError("AdamState: moment buffer counts differ");
    }
}

void AdamState::step(std::vector<TensorRef> params, const std::vector<ConstTensorRef>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size()) {
        throw ContractError("AdamState::step: tensor count does not match optimizer state");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i].values.size() != m_[i].size() || grads[i].values.size() != m_[i].size()) {
            throw ContractError("AdamState::step: tensor " + params[i].name +
                                " does not match optimizer buffers");
        }
        if (!all_finite(grads[i].values)) {
            throw NumericError("AdamState::step: non-finite gradient in tensor " +
                               grads[i].name);
        }
    }

    ++step_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(step_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(step_));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& m = m_[i];
        auto& v = v_[i];
        auto theta = params[i].values;
        const auto g = grads[i].values;
        for (std::size_t k = 0; k < theta.size(); ++k) {
            m[k] = cfg_.beta1 * m[k] + (1.0 - cfg_.beta1) * g[k];
            v[k] = cfg_.beta2 * v[k] + (1.0 - cfg_.beta2) * g[k] * g[k];
            const double m_hat = m[k] / c1;
            const double v_hat = v[k] / c2;
            theta[k] -= cfg_.learning_rate * m_hat / (std::sqrt(v_hat) + cfg_.epsilon);
        }
    }
}

}  // namespace finlstm
