#include "finlstm/train.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include "finlstm/errors.hpp"
#include "finlstm/init.hpp"

namespace finlstm {

CurriculumSchedule default_schedule() { return schedule_up_to(256, 100); }

CurriculumSchedule schedule_up_to(std::size_t max_length, std::size_t final_epochs) {
    if (max_length < 2) throw ContractError("schedule_up_to: max length must be at least 2");
    if (final_epochs == 0) throw ContractError("schedule_up_to: final epochs must be positive");
    CurriculumSchedule schedule;
    for (std::size_t len = 2; len <= max_length; len *= 2) {
        schedule.stages.push_back({len, 1});
    }
    schedule.stages.back().epochs = final_epochs;
    return schedule;
}

std::vector<double> train_stage(Model& model, const ReturnsSeries& series,
                                const CurriculumStage& stage, const TrainConfig& cfg,
                                AdamState& adam, Rng& rng) {
    if (cfg.batch_size == 0) throw ContractError("train_stage: batch size must be positive");
    if (stage.epochs == 0) throw ContractError("train_stage: stage has zero epochs");
    const auto windows = make_windows(series, stage.window_length, 1);

    std::vector<double> epoch_losses;
    epoch_losses.reserve(stage.epochs);
    for (std::size_t epoch = 0; epoch < stage.epochs; ++epoch) {
        const auto batches = make_batches(windows, cfg.batch_size, rng);
        double loss_sum = 0.0;
        std::size_t samples = 0;
        for (const Batch& batch : batches) {
            ModelGrads mean_grads = ModelGrads::zeros_like(model);
            double batch_loss = 0.0;
            for (const WindowSample& sample : batch) {
                GradientResult res = model_gradients(model, sample.x, sample.y);
                batch_loss += res.loss;
                add_grads(mean_grads, res.grads);
            }
            if (!std::isfinite(batch_loss)) {
                throw NumericError("train_stage: non-finite loss at window length " +
                                   std::to_string(stage.window_length) + ", epoch " +
                                   std::to_string(epoch + 1));
            }
            scale_grads(mean_grads, 1.0 / static_cast<double>(batch.size()));
            adam.step(tensor_refs(model), tensor_refs(std::as_const(mean_grads)));
            loss_sum += batch_loss;
            samples += batch.size();
        }
        epoch_losses.push_back(loss_sum / static_cast<double>(samples));
    }
    return epoch_losses;
}

std::vector<StageSummary> summarize_history(const TrainingHistory& history) {
    std::vector<StageSummary> summaries;
    for (const EpochRecord& rec : history) {
        if (summaries.empty() || summaries.back().stage != rec.stage) {
            summaries.push_back({rec.stage, rec.window_length, 0, 0.0});
        }
        StageSummary& s = summaries.back();
        s.mean_loss = (s.mean_loss * static_cast<double>(s.epochs) + rec.mean_loss) /
                      static_cast<double>(s.epochs + 1);
        ++s.epochs;
    }
    return summaries;
}

TrainResult train_series(const ReturnsSeries& train_series, const TrainConfig& cfg,
                         const WarnFn& warn) {
    cfg.model.validate();
    if (cfg.batch_size == 0) throw ContractError("train_series: batch size must be positive");
    if (cfg.schedule.stages.empty()) throw ContractError("train_series: empty schedule");

    Rng rng(cfg.seed);
    Model model = build_model(cfg.model, rng);
    AdamState adam(model, cfg.adam);
    TrainingHistory history;

    for (std::size_t s = 0; s < cfg.schedule.stages.size(); ++s) {
        const CurriculumStage& stage = cfg.schedule.stages[s];
        if (train_series.size() < stage.window_length + 1) {
            emit_warning(warn, "skipping stage " + std::to_string(s + 1) + " (length " +
                                   std::to_string(stage.window_length) + "): series has only " +
                                   std::to_string(train_series.size()) + " return rows");
            continue;
        }
        std::vector<double> losses;
        try {
            losses = train_stage(model, train_series, stage, cfg, adam, rng);
        } catch (const std::exception& e) {
            std::ostringstream report;
            report << "training aborted at stage " << s + 1 << " (length "
                   << stage.window_length << "): " << e.what();
            report << "; completed stages:";
            for (const StageSummary& done : summarize_history(history)) {
                report << " [" << done.window_length << ": " << done.mean_loss << "]";
            }
            throw NumericError(report.str());
        }
        for (std::size_t e = 0; e < losses.size(); ++e) {
            history.push_back({s + 1, stage.window_length, e + 1, losses[e]});
        }
    }

    const auto summaries = summarize_history(history);
    Checkpoint ckpt = make_checkpoint(model, cfg.seed, &adam, summaries);
    return {std::move(model), std::move(ckpt), std::move(history)};
}

TrainResult train_full(const std::string& csv_path, const FullTrainOptions& options,
                       const WarnFn& warn) {
    const auto records = load_csv(csv_path, warn);
    const auto series = to_returns(records);
    const auto split = split_by_date(series, options.train_start, options.train_end,
                                     options.test_start, options.test_end);
    return train_series(split.train, options.train, warn);
}

void write_history_csv(const TrainingHistory& history, std::ostream& out) {
    out << "stage,epoch,mean_loss\n";
    char buf[64];
    for (const EpochRecord& rec : history) {
        std::snprintf(buf, sizeof(buf), "%.17g", rec.mean_loss);
        out << rec.window_length << ',' << rec.epoch << ',' << buf << '\n';
    }
}

}  // namespace finlstm
