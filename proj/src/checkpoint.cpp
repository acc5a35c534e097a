#include "finlstm/checkpoint.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "finlstm/errors.hpp"

namespace finlstm {

namespace {

constexpr const char* kMagic = "finlstm-checkpoint";

std::string hex_double(double v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(std::bit_cast<std::uint64_t>(v)));
    return buf;
}

double parse_hex_double(std::string_view token, const std::string& context) {
    std::uint64_t bits = 0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    const auto [ptr, ec] = std::from_chars(begin, end, bits, 16);
    if (token.size() != 16 || ec != std::errc{} || ptr != end) {
        throw CheckpointError(context + ": bad value token '" + std::string(token) + "'");
    }
    return std::bit_cast<double>(bits);
}

void write_tensor(std::ostringstream& out, const char* keyword, const CheckpointTensor& t) {
    out << keyword << ' ' << t.name << ' ' << t.rows << ' ' << t.cols << '\n';
    for (std::size_t k = 0; k < t.values.size(); ++k) {
        out << hex_double(t.values[k]);
        out << ((k % 8 == 7 || k + 1 == t.values.size()) ? '\n' : ' ');
    }
}

// Whitespace-token reader over the checkpoint text.
class TokenReader {
public:
    explicit TokenReader(std::string_view text) : text_(text) {}

    std::optional<std::string_view> next() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        if (pos_ >= text_.size()) return std::nullopt;
        const std::size_t start = pos_;
        while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_]))) {
            ++pos_;
        }
        return text_.substr(start, pos_ - start);
    }

    std::string_view require(const std::string& context) {
        auto tok = next();
        if (!tok) throw CheckpointError("truncated checkpoint: " + context);
        return *tok;
    }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

std::size_t parse_count(std::string_view token, const std::string& context) {
    std::size_t value = 0;
    const char* begin = token.data();
    const auto [ptr, ec] = std::from_chars(begin, begin + token.size(), value);
    if (ec != std::errc{} || ptr != begin + token.size()) {
        throw CheckpointError(context + ": bad count '" + std::string(token) + "'");
    }
    return value;
}

CheckpointTensor read_tensor(TokenReader& reader) {
    CheckpointTensor t;
    t.name = std::string(reader.require("expected tensor name"));
    const std::string context = "tensor " + t.name;
    t.rows = parse_count(reader.require(context + ": expected row count"), context);
    t.cols = parse_count(reader.require(context + ": expected column count"), context);
    if (t.rows == 0 || t.cols == 0) {
        throw CheckpointError(context + ": zero dimension");
    }
    const std::size_t total = t.rows * t.cols;
    t.values.reserve(total);
    for (std::size_t k = 0; k < total; ++k) {
        auto tok = reader.next();
        if (!tok) {
            throw CheckpointError("truncated tensor " + t.name + ": expected " +
                                  std::to_string(total) + " values, got " + std::to_string(k));
        }
        t.values.push_back(parse_hex_double(*tok, context));
    }
    return t;
}

}  // namespace

Checkpoint make_checkpoint(const Model& model, std::uint64_t seed, const AdamState* adam,
                           std::span<const StageSummary> history) {
    model.validate();
    Checkpoint ckpt;
    ckpt.config = model.config;
    ckpt.seed = seed;
    for (const auto& ref : tensor_refs(model)) {
        ckpt.tensors.push_back({ref.name, ref.rows, ref.cols,
                                std::vector<double>(ref.values.begin(), ref.values.end())});
    }
    if (adam != nullptr) {
        AdamSnapshot snap;
        snap.config = adam->config();
        snap.step = adam->step_count();
        const auto refs = tensor_refs(model);
        if (adam->first_moments().size() != refs.size()) {
            throw ContractError("make_checkpoint: optimizer state does not match the model");
        }
        for (std::size_t i = 0; i < refs.size(); ++i) {
            snap.first_moments.push_back(
                {refs[i].name, refs[i].rows, refs[i].cols, adam->first_moments()[i]});
            snap.second_moments.push_back(
                {refs[i].name, refs[i].rows, refs[i].cols, adam->second_moments()[i]});
        }
        ckpt.adam = std::move(snap);
    }
    ckpt.history.assign(history.begin(), history.end());
    return ckpt;
}

Model model_from_checkpoint(const Checkpoint& ckpt) {
    if (ckpt.version != Checkpoint::kVersion) {
        throw CheckpointError("unsupported checkpoint version " + std::to_string(ckpt.version));
    }
    try {
        ckpt.config.validate();
    } catch (const ContractError& e) {
        throw CheckpointError(std::string("bad model config: ") + e.what());
    }
    Model model = Model::zeros(ckpt.config);

    std::map<std::string, const CheckpointTensor*> by_name;
    for (const auto& t : ckpt.tensors) {
        if (!by_name.emplace(t.name, &t).second) {
            throw CheckpointError("duplicate tensor " + t.name);
        }
    }
    std::size_t used = 0;
    for (auto& ref : tensor_refs(model)) {
        const auto it = by_name.find(ref.name);
        if (it == by_name.end()) throw CheckpointError("missing tensor " + ref.name);
        const CheckpointTensor& t = *it->second;
        if (t.rows != ref.rows || t.cols != ref.cols || t.values.size() != ref.values.size()) {
            throw CheckpointError("tensor " + ref.name + " has shape " + std::to_string(t.rows) +
                                  "x" + std::to_string(t.cols) + ", expected " +
                                  std::to_string(ref.rows) + "x" + std::to_string(ref.cols));
        }
        if (!all_finite(t.values)) {
            throw CheckpointError("tensor " + ref.name + " has non-finite entries");
        }
        std::copy(t.values.begin(), t.values.end(), ref.values.begin());
        ++used;
    }
    if (used != ckpt.tensors.size()) {
        throw CheckpointError("checkpoint carries " + std::to_string(ckpt.tensors.size()) +
                              " tensors, model expects " + std::to_string(used));
    }
    return model;
}

AdamState adam_from_checkpoint(const Checkpoint& ckpt, const Model& model) {
    if (!ckpt.adam) throw CheckpointError("checkpoint carries no optimizer state");
    const AdamSnapshot& snap = *ckpt.adam;
    const auto refs = tensor_refs(model);
    auto unpack = [&](const std::vector<CheckpointTensor>& tensors, const char* which) {
        if (tensors.size() != refs.size()) {
            throw CheckpointError(std::string("optimizer ") + which +
                                  " buffers do not match the model");
        }
        std::vector<std::vector<double>> out;
        for (std::size_t i = 0; i < refs.size(); ++i) {
            if (tensors[i].name != refs[i].name ||
                tensors[i].values.size() != refs[i].values.size()) {
                throw CheckpointError(std::string("optimizer ") + which + " tensor " +
                                      tensors[i].name + " does not match the model");
            }
            out.push_back(tensors[i].values);
        }
        return out;
    };
    return AdamState(snap.config, snap.step, unpack(snap.first_moments, "first-moment"),
                     unpack(snap.second_moments, "second-moment"));
}

std::string encode_checkpoint(const Checkpoint& ckpt) {
    std::ostringstream out;
    out << kMagic << " v" << ckpt.version << '\n';
    out << "config input_dim " << ckpt.config.input_dim << '\n';
    out << "config num_lstm_layers " << ckpt.config.num_lstm_layers << '\n';
    out << "config hidden_dim " << ckpt.config.hidden_dim << '\n';
    out << "config output_dim " << ckpt.config.output_dim << '\n';
    out << "seed " << ckpt.seed << '\n';
    for (const auto& t : ckpt.tensors) write_tensor(out, "tensor", t);
    if (ckpt.adam) {
        const AdamSnapshot& snap = *ckpt.adam;
        out << "adam config " << hex_double(snap.config.learning_rate) << ' '
            << hex_double(snap.config.beta1) << ' ' << hex_double(snap.config.beta2) << ' '
            << hex_double(snap.config.epsilon) << '\n';
        out << "adam step " << snap.step << '\n';
        for (const auto& t : snap.first_moments) write_tensor(out, "adam_m", t);
        for (const auto& t : snap.second_moments) write_tensor(out, "adam_v", t);
    }
    for (const auto& s : ckpt.history) {
        out << "stage " << s.stage << ' ' << s.window_length << ' ' << s.epochs << ' '
            << hex_double(s.mean_loss) << '\n';
    }
    out << "end\n";
    return out.str();
}

Checkpoint decode_checkpoint(std::string_view text) {
    TokenReader reader(text);
    const auto magic = reader.next();
    if (!magic || *magic != kMagic) {
        throw CheckpointError("not a checkpoint file (bad magic)");
    }
    const auto version = reader.require("missing version");
    if (version != "v" + std::to_string(Checkpoint::kVersion)) {
        throw CheckpointError("unsupported checkpoint version '" + std::string(version) +
                              "', expected v" + std::to_string(Checkpoint::kVersion));
    }

    Checkpoint ckpt;
    bool saw_end = false;
    std::map<std::string, bool> config_seen;
    while (auto tok = reader.next()) {
        if (*tok == "config") {
            const auto key = reader.require("config: expected key");
            const auto value = reader.require("config " + std::string(key) + ": expected value");
            const std::size_t v = parse_count(value, "config " + std::string(key));
            if (key == "input_dim") {
                ckpt.config.input_dim = v;
            } else if (key == "num_lstm_layers") {
                ckpt.config.num_lstm_layers = v;
            } else if (key == "hidden_dim") {
                ckpt.config.hidden_dim = v;
            } else if (key == "output_dim") {
                ckpt.config.output_dim = v;
            } else {
                throw CheckpointError("unknown config key '" + std::string(key) + "'");
            }
            config_seen[std::string(key)] = true;
        } else if (*tok == "seed") {
            std::uint64_t seed = 0;
            const auto value = reader.require("seed: expected value");
            const char* begin = value.data();
            const auto [ptr, ec] = std::from_chars(begin, begin + value.size(), seed);
            if (ec != std::errc{} || ptr != begin + value.size()) {
                throw CheckpointError("seed: bad value '" + std::string(value) + "'");
            }
            ckpt.seed = seed;
        } else if (*tok == "tensor") {
            ckpt.tensors.push_back(read_tensor(reader));
        } else if (*tok == "adam") {
            const auto what = reader.require("adam: expected subkey");
            if (!ckpt.adam) ckpt.adam.emplace();
            if (what == "config") {
                ckpt.adam->config.learning_rate =
                    parse_hex_double(reader.require("adam config"), "adam config");
                ckpt.adam->config.beta1 =
                    parse_hex_double(reader.require("adam config"), "adam config");
                ckpt.adam->config.beta2 =
                    parse_hex_double(reader.require("adam config"), "adam config");
                ckpt.adam->config.epsilon =
                    parse_hex_double(reader.require("adam config"), "adam config");
            } else if (what == "step") {
                ckpt.adam->step = parse_count(reader.require("adam step"), "adam step");
            } else {
                throw CheckpointError("unknown adam subkey '" + std::string(what) + "'");
            }
        } else if (*tok == "adam_m" || *tok == "adam_v") {
            if (!ckpt.adam) ckpt.adam.emplace();
            auto& dst = *tok == "adam_m" ? ckpt.adam->first_moments : ckpt.adam->second_moments;
            dst.push_back(read_tensor(reader));
        } else if (*tok == "stage") {
            StageSummary s;
            s.stage = parse_count(reader.require("stage: expected index"), "stage");
            s.window_length = parse_count(reader.require("stage: expected length"), "stage");
            s.epochs = parse_count(reader.require("stage: expected epochs"), "stage");
            s.mean_loss = parse_hex_double(reader.require("stage: expected loss"), "stage");
            ckpt.history.push_back(s);
        } else if (*tok == "end") {
            saw_end = true;
            break;
        } else {
            throw CheckpointError("unknown record '" + std::string(*tok) + "'");
        }
    }
    if (!saw_end) throw CheckpointError("truncated checkpoint: missing end marker");
    for (const char* key : {"input_dim", "num_lstm_layers", "hidden_dim", "output_dim"}) {
        if (!config_seen.contains(key)) {
            throw CheckpointError(std::string("missing config key '") + key + "'");
        }
    }
    if (ckpt.tensors.empty()) throw CheckpointError("checkpoint carries no tensors");
    return ckpt;
}

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CheckpointError("cannot open '" + path + "' for writing");
    out << encode_checkpoint(ckpt);
    out.flush();
    if (!out) throw CheckpointError("failed writing '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CheckpointError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return decode_checkpoint(buf.str());
}

}  // namespace finlstm
