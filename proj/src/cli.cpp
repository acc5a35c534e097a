#include "finlstm/cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

#include "finlstm/checkpoint.hpp"
#include "finlstm/errors.hpp"
#include "finlstm/eval.hpp"
#include "finlstm/train.hpp"

namespace finlstm {

namespace {

// Failure with a stable machine-readable code; printed as
//   error[CODE]: message
struct CliError {
    std::string code;
    std::string message;
};

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

Date parse_date_flag(const std::string& value, const std::string& flag) {
    try {
        return Date::parse(value);
    } catch (const DataError& e) {
        throw CliError{"BAD_ARGS", flag + ": " + e.what()};
    }
}

void require_file(const std::string& path, const std::string& code) {
    if (!std::filesystem::exists(path)) {
        throw CliError{code, "no such file: " + path};
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError{"IO_ERROR", "cannot open '" + path + "' for writing"};
    out << content;
    out.flush();
    if (!out) throw CliError{"IO_ERROR", "failed writing '" + path + "'"};
}

// Flags shared by the data-consuming subcommands.
struct DataFlags {
    std::string data_path;
    std::string train_start = "2005-01-01";
    std::string train_end = "2014-12-31";
    std::string test_start = "2015-01-01";
    std::string test_end = "2015-12-31";

    void attach(CLI::App& cmd, bool with_train_range) {
        cmd.add_option("--data", data_path, "OHLCV CSV file (Yahoo daily export layout)")
            ->required();
        if (with_train_range) {
            cmd.add_option("--train-start", train_start, "training range start (inclusive)",
                           true);
            cmd.add_option("--train-end", train_end, "training range end (inclusive)", true);
        }
        cmd.add_option("--test-start", test_start, "test range start (inclusive)", true);
        cmd.add_option("--test-end", test_end, "test range end (inclusive)", true);
    }
};

ReturnsSeries load_series(const std::string& path, std::ostream& err) {
    require_file(path, "DATA_NOT_FOUND");
    const WarnFn warn = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
    return to_returns(load_csv(path, warn));
}

int cmd_train(const DataFlags& data, std::size_t layers, std::size_t hidden,
              std::uint64_t seed, std::size_t batch_size, std::size_t max_length,
              const std::string& out_path, std::string history_path, std::ostream& out,
              std::ostream& err) {
    FullTrainOptions options;
    options.train.model.num_lstm_layers = layers;
    options.train.model.hidden_dim = hidden;
    options.train.seed = seed;
    options.train.batch_size = batch_size;
    options.train.schedule = schedule_up_to(max_length);
    options.train_start = parse_date_flag(data.train_start, "--train-start");
    options.train_end = parse_date_flag(data.train_end, "--train-end");
    options.test_start = parse_date_flag(data.test_start, "--test-start");
    options.test_end = parse_date_flag(data.test_end, "--test-end");

    require_file(data.data_path, "DATA_NOT_FOUND");
    const WarnFn warn = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
    const TrainResult result = train_full(data.data_path, options, warn);

    save_checkpoint(result.checkpoint, out_path);
    if (history_path.empty()) history_path = out_path + ".history.csv";
    std::ostringstream history;
    write_history_csv(result.history, history);
    write_text_file(history_path, history.str());

    for (const StageSummary& s : summarize_history(result.history)) {
        out << "stage " << s.window_length << " epochs " << s.epochs << " mean_loss "
            << fmt6(s.mean_loss) << "\n";
    }
    out << "checkpoint: " << out_path << "\n";
    out << "history: " << history_path << "\n";
    return 0;
}

int cmd_eval(const DataFlags& data, const std::string& ckpt_path, std::size_t warmup,
             std::ostream& out, std::ostream& err) {
    require_file(ckpt_path, "CKPT_NOT_FOUND");
    const Checkpoint ckpt = load_checkpoint(ckpt_path);
    const Model model = model_from_checkpoint(ckpt);

    const ReturnsSeries series = load_series(data.data_path, err);
    const ReturnsSeries test = slice_by_date(series, parse_date_flag(data.test_start, "--test-start"),
                                             parse_date_flag(data.test_end, "--test-end"));
    EvalReport report;
    try {
        report = evaluate_model(model, test, warmup);
    } catch (const ContractError& e) {
        throw CliError{"CONFIG_MISMATCH", e.what()};
    }
    out << "rmse=" << fmt17(report.rmse) << " baseline=" << fmt17(report.baseline_rmse) << "\n";
    return 0;
}

int cmd_baseline(const DataFlags& data, std::ostream& out, std::ostream& err) {
    const ReturnsSeries series = load_series(data.data_path, err);
    const ReturnsSeries test = slice_by_date(series, parse_date_flag(data.test_start, "--test-start"),
                                             parse_date_flag(data.test_end, "--test-end"));
    out << "baseline_rmse=" << fmt17(naive_baseline_rmse(test)) << "\n";
    return 0;
}

int cmd_grid(const DataFlags& data, const std::vector<std::size_t>& layers,
             const std::vector<std::size_t>& sizes, std::uint64_t seed,
             std::size_t batch_size, std::size_t max_length, std::size_t warmup,
             std::size_t jobs, const std::string& csv_path, const std::string& table_path,
             std::ostream& out, std::ostream& err) {
    GridOptions options;
    options.layer_counts = layers;
    options.hidden_sizes = sizes;
    options.warmup = warmup;
    options.jobs = jobs;
    options.train.train.seed = seed;
    options.train.train.batch_size = batch_size;
    options.train.train.schedule = schedule_up_to(max_length);
    options.train.train_start = parse_date_flag(data.train_start, "--train-start");
    options.train.train_end = parse_date_flag(data.train_end, "--train-end");
    options.train.test_start = parse_date_flag(data.test_start, "--test-start");
    options.train.test_end = parse_date_flag(data.test_end, "--test-end");

    require_file(data.data_path, "DATA_NOT_FOUND");
    const WarnFn warn = [&err](const std::string& msg) { err << "warning: " << msg << "\n"; };
    const GridResult grid = run_grid(data.data_path, options, warn);

    std::ostringstream csv, table;
    write_grid_csv(grid, csv);
    write_grid_table(grid, table);
    write_text_file(csv_path, csv.str());
    write_text_file(table_path, table.str());
    out << table.str();
    out << "grid csv: " << csv_path << "\n";
    out << "grid table: " << table_path << "\n";

    const bool any_ok = std::any_of(grid.cells.begin(), grid.cells.end(),
                                    [](const GridCell& c) { return c.ok; });
    if (!any_ok) throw CliError{"GRID_FAILED", "every grid cell failed"};
    return 0;
}

std::string one_line(std::string msg) {
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    return msg;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"LSTM toolkit for daily OHLCV returns forecasting"};
    app.name("finlstm");
    app.require_subcommand(1);

    // train
    auto* train_cmd = app.add_subcommand("train", "train a model over the length-doubling curriculum");
    DataFlags train_data;
    train_data.attach(*train_cmd, true);
    std::size_t layers = 1, hidden = 50, batch_size = 20, max_length = 256;
    std::uint64_t seed = 42;
    std::string out_path = "model.ckpt", history_path;
    train_cmd->add_option("--layers", layers, "number of stacked LSTM layers", true);
    train_cmd->add_option("--hidden", hidden, "hidden units per LSTM layer", true);
    train_cmd->add_option("--seed", seed, "RNG seed", true);
    train_cmd->add_option("--batch-size", batch_size, "sequences per optimizer step", true);
    train_cmd->add_option("--max-length", max_length,
                          "truncate the curriculum at this window length", true);
    train_cmd->add_option("--out", out_path, "checkpoint output path", true);
    train_cmd->add_option("--history", history_path,
                          "history CSV path (default: <out>.history.csv)");

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "score a checkpoint on the test range");
    DataFlags eval_data;
    eval_data.attach(*eval_cmd, false);
    std::string ckpt_path;
    std::size_t warmup = 0;
    eval_cmd->add_option("--ckpt", ckpt_path, "checkpoint to evaluate")->required();
    eval_cmd->add_option("--warmup", warmup,
                         "leading test steps that only warm the state (not scored)", true);

    // grid
    auto* grid_cmd = app.add_subcommand("grid", "train and score an architecture grid");
    DataFlags grid_data;
    grid_data.attach(*grid_cmd, true);
    std::vector<std::size_t> grid_layers{1, 2, 3};
    std::vector<std::size_t> grid_sizes{50, 100, 250, 500};
    std::uint64_t grid_seed = 42;
    std::size_t grid_batch = 20, grid_max_length = 256, grid_warmup = 0, jobs = 1;
    std::string grid_csv = "grid.csv", grid_table = "grid.txt";
    grid_cmd->add_option("--layers", grid_layers, "layer counts to sweep", true)
        ->delimiter(',');
    grid_cmd->add_option("--sizes", grid_sizes, "hidden sizes to sweep", true)->delimiter(',');
    grid_cmd->add_option("--seed", grid_seed, "RNG seed for every cell", true);
    grid_cmd->add_option("--batch-size", grid_batch, "sequences per optimizer step", true);
    grid_cmd->add_option("--max-length", grid_max_length,
                         "truncate the curriculum at this window length", true);
    grid_cmd->add_option("--warmup", grid_warmup, "unscored leading test steps", true);
    grid_cmd->add_option("--jobs", jobs, "cells trained in parallel", true);
    grid_cmd->add_option("--csv", grid_csv, "grid CSV output path", true);
    grid_cmd->add_option("--table", grid_table, "grid table output path", true);

    // baseline
    auto* baseline_cmd =
        app.add_subcommand("baseline", "no-change predictor RMSE on the test range");
    DataFlags baseline_data;
    baseline_data.attach(*baseline_cmd, false);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error[BAD_ARGS]: " << one_line(e.what()) << "\n";
        return 1;
    }

    try {
        if (train_cmd->parsed()) {
            return cmd_train(train_data, layers, hidden, seed, batch_size, max_length, out_path,
                             history_path, out, err);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_data, ckpt_path, warmup, out, err);
        }
        if (grid_cmd->parsed()) {
            return cmd_grid(grid_data, grid_layers, grid_sizes, grid_seed, grid_batch,
                            grid_max_length, grid_warmup, jobs, grid_csv, grid_table, out, err);
        }
        if (baseline_cmd->parsed()) {
            return cmd_baseline(baseline_data, out, err);
        }
        err << "error[BAD_ARGS]: no subcommand\n";
        return 1;
    } catch (const CliError& e) {
        err << "error[" << e.code << "]: " << one_line(e.message) << "\n";
        return 1;
    } catch (const EmptySplitError& e) {
        err << "error[EMPTY_SPLIT]: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const CheckpointError& e) {
        err << "error[CKPT_CORRUPT]: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error[DATA_INVALID]: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const ContractError& e) {
        err << "error[BAD_ARGS]: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const NumericError& e) {
        err << "error[NUMERIC_FAILURE]: " << one_line(e.what()) << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error[INTERNAL]: " << one_line(e.what()) << "\n";
        return 1;
    }
}

}  // namespace finlstm
