#include "finlstm/eval.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <ostream>
#include <thread>

#include "finlstm/errors.hpp"

namespace finlstm {

double rmse(const Matrix& preds, const Matrix& targets) {
    if (preds.rows() != targets.rows() || preds.cols() != targets.cols()) {
        throw ContractError("rmse: shapes differ, " + shape_string(preds) + " vs " +
                            shape_string(targets));
    }
    if (preds.empty()) throw ContractError("rmse: empty inputs");
    double sum = 0.0;
    for (std::size_t k = 0; k < preds.size(); ++k) {
        const double diff = preds.values()[k] - targets.values()[k];
        sum += diff * diff;
    }
    return std::sqrt(sum / static_cast<double>(preds.size()));
}

namespace {

// Target rows t(+1) of a series: the next-day O,H,L,C returns scored against
// predictions made at rows first..last.
Matrix target_rows(const ReturnsSeries& series, std::size_t first, std::size_t count) {
    Matrix targets(count, kNumTargets);
    for (std::size_t t = 0; t < count; ++t) {
        const auto src = series.inputs.row(first + t + 1);
        auto dst = targets.row(t);
        std::copy(src.begin(), src.begin() + kNumTargets, dst.begin());
    }
    return targets;
}

}  // namespace

double naive_baseline_rmse(const ReturnsSeries& test) {
    if (test.size() < 2) {
        throw DataError("naive_baseline_rmse: need at least 2 return rows, got " +
                        std::to_string(test.size()));
    }
    const std::size_t scored = test.size() - 1;
    const Matrix zeros(scored, kNumTargets);
    return rmse(zeros, target_rows(test, 0, scored));
}

EvalReport evaluate_model(const Model& m, const ReturnsSeries& test, std::size_t warmup) {
    m.validate();
    if (m.config.input_dim != test.inputs.cols()) {
        throw ContractError("evaluate_model: model expects input width " +
                            std::to_string(m.config.input_dim) + ", series provides " +
                            std::to_string(test.inputs.cols()));
    }
    if (m.config.output_dim != kNumTargets) {
        throw ContractError("evaluate_model: model emits " +
                            std::to_string(m.config.output_dim) + " outputs, scoring needs " +
                            std::to_string(kNumTargets));
    }
    if (test.size() < warmup + 2) {
        throw DataError("evaluate_model: test series has " + std::to_string(test.size()) +
                        " return rows; warmup " + std::to_string(warmup) +
                        " leaves no step to score");
    }

    const ModelForward fwd = model_forward(m, test.inputs);
    const std::size_t scored = test.size() - 1 - warmup;
    Matrix preds(scored, kNumTargets);
    for (std::size_t t = 0; t < scored; ++t) {
        const auto src = fwd.predictions.row(warmup + t);
        auto dst = preds.row(t);
        std::copy(src.begin(), src.end(), dst.begin());
    }

    EvalReport report;
    report.rmse = rmse(preds, target_rows(test, warmup, scored));
    report.num_scored_steps = scored;
    report.config = m.config;
    report.baseline_rmse = naive_baseline_rmse(test);
    return report;
}

GridResult run_grid_on_series(const ReturnsSeries& train, const ReturnsSeries& test,
                              const GridOptions& options, const WarnFn& warn) {
    if (options.layer_counts.empty() || options.hidden_sizes.empty()) {
        throw ContractError("run_grid: empty layer or size set");
    }

    GridResult grid;
    grid.baseline_rmse = naive_baseline_rmse(test);
    for (std::size_t layers : options.layer_counts) {
        for (std::size_t hidden : options.hidden_sizes) {
            GridCell cell;
            cell.layers = layers;
            cell.hidden = hidden;
            cell.seed = options.train.train.seed;
            grid.cells.push_back(cell);
        }
    }

    std::mutex warn_mutex;
    const WarnFn locked_warn = [&](const std::string& msg) {
        const std::lock_guard<std::mutex> lock(warn_mutex);
        emit_warning(warn, msg);
    };

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t index = next.fetch_add(1);
            if (index >= grid.cells.size()) return;
            GridCell& cell = grid.cells[index];
            try {
                TrainConfig cfg = options.train.train;
                cfg.model.num_lstm_layers = cell.layers;
                cfg.model.hidden_dim = cell.hidden;
                const TrainResult trained = train_series(train, cfg, locked_warn);
                const EvalReport report = evaluate_model(trained.model, test, options.warmup);
                cell.rmse = report.rmse;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
                locked_warn("grid cell (" + std::to_string(cell.layers) + "," +
                            std::to_string(cell.hidden) + ") failed: " + cell.error);
            }
        }
    };

    const std::size_t jobs = std::max<std::size_t>(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t j = 0; j < std::min(jobs, grid.cells.size()); ++j) {
            pool.emplace_back(worker);
        }
        for (auto& t : pool) t.join();
    }
    return grid;
}

GridResult run_grid(const std::string& csv_path, const GridOptions& options,
                    const WarnFn& warn) {
    const auto records = load_csv(csv_path, warn);
    const auto series = to_returns(records);
    const auto split = split_by_date(series, options.train.train_start, options.train.train_end,
                                     options.train.test_start, options.train.test_end);
    return run_grid_on_series(split.train, split.test, options, warn);
}

void write_grid_csv(const GridResult& grid, std::ostream& out) {
    out << "layers,size,rmse,baseline_rmse,seed\n";
    char value[64], baseline[64];
    std::snprintf(baseline, sizeof(baseline), "%.17g", grid.baseline_rmse);
    for (const GridCell& cell : grid.cells) {
        std::snprintf(value, sizeof(value), "%.17g",
                      cell.ok ? cell.rmse : std::nan(""));
        out << cell.layers << ',' << cell.hidden << ',' << value << ',' << baseline << ','
            << cell.seed << '\n';
    }
}

void write_grid_table(const GridResult& grid, std::ostream& out) {
    std::vector<std::size_t> layer_counts, hidden_sizes;
    for (const GridCell& cell : grid.cells) {
        if (layer_counts.empty() || layer_counts.back() != cell.layers) {
            layer_counts.push_back(cell.layers);
        }
    }
    for (const GridCell& cell : grid.cells) {
        if (cell.layers != layer_counts.front()) break;
        hidden_sizes.push_back(cell.hidden);
    }

    char buf[64];
    out << "returns rmse by architecture (layers x hidden size)\n";
    out << "  layers";
    for (std::size_t h : hidden_sizes) {
        std::snprintf(buf, sizeof(buf), "%9zu", h);
        out << buf;
    }
    out << '\n';
    std::size_t index = 0;
    for (std::size_t l : layer_counts) {
        std::snprintf(buf, sizeof(buf), "  %6zu", l);
        out << buf;
        for (std::size_t h = 0; h < hidden_sizes.size(); ++h, ++index) {
            const GridCell& cell = grid.cells[index];
            if (cell.ok) {
                std::snprintf(buf, sizeof(buf), "%9.4f", cell.rmse);
            } else {
                std::snprintf(buf, sizeof(buf), "%9s", "err");
            }
            out << buf;
        }
        out << '\n';
    }
    std::snprintf(buf, sizeof(buf), "%.4f", grid.baseline_rmse);
    out << "  no-change baseline: " << buf << '\n';
}

}  // namespace finlstm
