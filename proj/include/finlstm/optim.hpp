#pragma once

#include <cstdint>
#include <vector>

#include "finlstm/model.hpp"

namespace finlstm {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;

    friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

/// ADAM with bias correction. Moment buffers mirror the model's pinned tensor
/// enumeration; one state instance spans an entire training run (moments are
/// never reset between curriculum stages).
class AdamState {
public:
    AdamState() = default;
    explicit AdamState(const Model& model, const AdamConfig& cfg = {});
    /// Restores a previously serialized state; buffer layout must match the
    /// model the state will drive.
    AdamState(AdamConfig cfg, std::uint64_t step_count,
              std::vector<std::vector<double>> first_moments,
              std::vector<std::vector<double>> second_moments);

    const AdamConfig& config() const { return cfg_; }
    std::uint64_t step_count() const { return step_; }
    const std::vector<std::vector<double>>& first_moments() const { return m_; }
    const std::vector<std::vector<double>>& second_moments() const { return v_; }

    /// One update, elementwise over every tensor:
    ///   m <- b1 m + (1-b1) g;  v <- b2 v + (1-b2) g^2
    ///   theta <- theta - lr * (m / (1-b1^t)) / (sqrt(v / (1-b2^t)) + eps)
    /// A non-finite gradient aborts with the offending tensor's name.
    void step(std::vector<TensorRef> params, const std::vector<ConstTensorRef>& grads);

private:
    AdamConfig cfg_{};
    std::uint64_t step_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

}  // namespace finlstm
