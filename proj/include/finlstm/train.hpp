#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "finlstm/checkpoint.hpp"
#include "finlstm/data.hpp"
#include "finlstm/model.hpp"
#include "finlstm/optim.hpp"

namespace finlstm {

struct CurriculumStage {
    std::size_t window_length = 0;
    std::size_t epochs = 0;

    friend bool operator==(const CurriculumStage&, const CurriculumStage&) = default;
};

struct CurriculumSchedule {
    std::vector<CurriculumStage> stages;
};

/// Window length doubling 2, 4, ..., 256; one epoch per stage except the
/// final stage, which trains for 100 epochs.
CurriculumSchedule default_schedule();

/// Same doubling pattern cut off at the largest power of two <= max_length
/// (max_length >= 2); the last remaining stage gets final_epochs.
CurriculumSchedule schedule_up_to(std::size_t max_length, std::size_t final_epochs = 100);

struct TrainConfig {
    ModelConfig model;
    CurriculumSchedule schedule = default_schedule();
    std::size_t batch_size = 20;
    std::uint64_t seed = 0;
    AdamConfig adam{};
};

struct EpochRecord {
    std::size_t stage = 0;  // 1-based
    std::size_t window_length = 0;
    std::size_t epoch = 0;  // 1-based within the stage
    double mean_loss = 0.0;
};

using TrainingHistory = std::vector<EpochRecord>;

/// One curriculum stage: per epoch, windows are reshuffled, chunked into
/// batches, and each batch contributes one optimizer step with the mean
/// gradient over its members. Returns the mean training loss per epoch.
std::vector<double> train_stage(Model& model, const ReturnsSeries& series,
                                const CurriculumStage& stage, const TrainConfig& cfg,
                                AdamState& adam, Rng& rng);

struct TrainResult {
    Model model;
    Checkpoint checkpoint;
    TrainingHistory history;
};

/// Builds a model from cfg.seed and runs every schedule stage in order with
/// one shared optimizer state. Stages the series is too short for are skipped
/// with a warning. A failed stage aborts with the completed-stage summary
/// embedded in the error message.
TrainResult train_series(const ReturnsSeries& train_series, const TrainConfig& cfg,
                         const WarnFn& warn = {});

struct FullTrainOptions {
    TrainConfig train;
    Date train_start{2005, 1, 1};
    Date train_end{2014, 12, 31};
    Date test_start{2015, 1, 1};
    Date test_end{2015, 12, 31};
};

/// CSV path in, trained model out: parse, convert to returns, split by date,
/// train on the training side.
TrainResult train_full(const std::string& csv_path, const FullTrainOptions& options,
                       const WarnFn& warn = {});

/// History as CSV with header "stage,epoch,mean_loss"; the stage column holds
/// the window length.
void write_history_csv(const TrainingHistory& history, std::ostream& out);

std::vector<StageSummary> summarize_history(const TrainingHistory& history);

}  // namespace finlstm
