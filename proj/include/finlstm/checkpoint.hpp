#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "finlstm/model.hpp"
#include "finlstm/optim.hpp"

namespace finlstm {

struct CheckpointTensor {
    std::string name;
    std::size_t rows = 0, cols = 0;
    std::vector<double> values;
};

struct AdamSnapshot {
    AdamConfig config;
    std::uint64_t step = 0;
    std::vector<CheckpointTensor> first_moments;
    std::vector<CheckpointTensor> second_moments;
};

struct StageSummary {
    std::size_t stage = 0;          // 1-based position in the schedule
    std::size_t window_length = 0;
    std::size_t epochs = 0;
    double mean_loss = 0.0;
};

/// Serialized model: config, seed, every parameter tensor, optionally the
/// optimizer state, and a per-stage loss summary. The text encoding stores
/// every 64-bit real as its IEEE-754 bit pattern in hexadecimal, so a round
/// trip reproduces predictions bitwise.
struct Checkpoint {
    static constexpr int kVersion = 1;

    int version = kVersion;
    ModelConfig config;
    std::uint64_t seed = 0;
    std::vector<CheckpointTensor> tensors;
    std::optional<AdamSnapshot> adam;
    std::vector<StageSummary> history;
};

class AdamState;

Checkpoint make_checkpoint(const Model& model, std::uint64_t seed,
                           const AdamState* adam = nullptr,
                           std::span<const StageSummary> history = {});

/// Rebuilds the model, validating tensor names and shapes against the stored
/// config; any inconsistency is a CheckpointError naming the tensor.
Model model_from_checkpoint(const Checkpoint& ckpt);

/// Rebuilds the optimizer state for `model`; requires the checkpoint to carry
/// one and its buffers to match the model's tensors.
AdamState adam_from_checkpoint(const Checkpoint& ckpt, const Model& model);

std::string encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::string_view text);

void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace finlstm
