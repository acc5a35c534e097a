#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "finlstm/data.hpp"
#include "finlstm/model.hpp"
#include "finlstm/train.hpp"

namespace finlstm {

struct EvalReport {
    double rmse = 0.0;
    std::size_t num_scored_steps = 0;
    ModelConfig config;
    double baseline_rmse = 0.0;
};

/// Root mean squared error over every scalar component.
double rmse(const Matrix& preds, const Matrix& targets);

/// RMSE of the no-change predictor (zero return every day) against the
/// series' next-day O,H,L,C returns; equals the root mean square of the
/// target returns themselves.
double naive_baseline_rmse(const ReturnsSeries& test);

/// Single pass over the whole test sequence with state carried across it.
/// The prediction at step t is scored against the step-t target (next-day
/// O,H,L,C); the first `warmup` steps only warm the recurrent state and are
/// excluded from scoring.
EvalReport evaluate_model(const Model& m, const ReturnsSeries& test, std::size_t warmup = 0);

struct GridCell {
    std::size_t layers = 0;
    std::size_t hidden = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    double rmse = 0.0;       // valid when ok
    std::string error;       // set when !ok
};

struct GridResult {
    std::vector<GridCell> cells;  // layers-major, sizes-minor order
    double baseline_rmse = 0.0;
};

struct GridOptions {
    std::vector<std::size_t> layer_counts{1, 2, 3};
    std::vector<std::size_t> hidden_sizes{50, 100, 250, 500};
    FullTrainOptions train;
    std::size_t warmup = 0;
    std::size_t jobs = 1;
};

/// Trains and evaluates every (layers, hidden) combination. Cells are
/// independent (each owns its rng, model, and optimizer) and may run in
/// parallel; a failing cell records its error and the rest still run.
GridResult run_grid_on_series(const ReturnsSeries& train, const ReturnsSeries& test,
                              const GridOptions& options, const WarnFn& warn = {});
GridResult run_grid(const std::string& csv_path, const GridOptions& options,
                    const WarnFn& warn = {});

/// CSV with header "layers,size,rmse,baseline_rmse,seed"; failed cells carry
/// nan in the rmse column.
void write_grid_csv(const GridResult& grid, std::ostream& out);

/// Aligned table, hidden sizes across, layer counts down, 4-decimal cells,
/// baseline on the last line.
void write_grid_table(const GridResult& grid, std::ostream& out);

}  // namespace finlstm
