#include "finlstm/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "finlstm/errors.hpp"

namespace finlstm {

namespace {

bool is_leap_year(int year) {
    return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
}

int days_in_month(int year, int month) {
    static constexpr int kDays[12] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && is_leap_year(year)) return 29;
    return kDays[month - 1];
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == ',') {
            fields.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return fields;
}

std::optional<double> parse_number(std::string_view field) {
    double value = 0.0;
    const char* begin = field.data();
    const char* end = begin + field.size();
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value)) return std::nullopt;
    return value;
}

}  // namespace

bool Date::valid() const {
    return year >= 1 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

std::optional<Date> Date::try_parse(std::string_view iso) {
    if (iso.size() != 10 || iso[4] != '-' || iso[7] != '-') return std::nullopt;
    auto digits = [](std::string_view s, int& out) {
        int v = 0;
        for (char c : s) {
            if (c < '0' || c > '9') return false;
            v = v * 10 + (c - '0');
        }
        out = v;
        return true;
    };
    Date d;
    if (!digits(iso.substr(0, 4), d.year) || !digits(iso.substr(5, 2), d.month) ||
        !digits(iso.substr(8, 2), d.day)) {
        return std::nullopt;
    }
    if (!d.valid()) return std::nullopt;
    return d;
}

Date Date::parse(std::string_view iso) {
    auto d = try_parse(iso);
    if (!d) throw DataError("bad date '" + std::string(iso) + "', expected YYYY-MM-DD");
    return *d;
}

std::string Date::to_string() const {
    char buf[11];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

void emit_warning(const WarnFn& warn, const std::string& msg) {
    if (warn) {
        warn(msg);
    } else {
        std::cerr << "warning: " << msg << "\n";
    }
}

std::vector<OhlcvRecord> parse_csv(std::string_view text, const WarnFn& warn) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= text.size(); ++i) {
        if (i == text.size() || text[i] == '\n') {
            lines.push_back(text.substr(start, i - start));
            start = i + 1;
        }
    }
    while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
    if (lines.empty()) throw DataError("empty CSV input");

    const auto header = split_fields(lines[0]);
    bool has_adj_close = false;
    const std::vector<std::string_view> with_adj = {"Date",  "Open",      "High",  "Low",
                                                    "Close", "Adj Close", "Volume"};
    const std::vector<std::string_view> without_adj = {"Date", "Open",  "High",
                                                       "Low",  "Close", "Volume"};
    if (std::equal(header.begin(), header.end(), with_adj.begin(), with_adj.end())) {
        has_adj_close = true;
    } else if (!std::equal(header.begin(), header.end(), without_adj.begin(),
                           without_adj.end())) {
        throw DataError("line 1: unrecognized header, expected "
                        "'Date,Open,High,Low,Close,Adj Close,Volume' "
                        "(Adj Close optional)");
    }
    const std::size_t expected_fields = has_adj_close ? 7 : 6;
    const std::size_t volume_col = has_adj_close ? 6 : 5;

    std::vector<OhlcvRecord> records;
    for (std::size_t li = 1; li < lines.size(); ++li) {
        const std::string line_no = std::to_string(li + 1);
        if (trim(lines[li]).empty()) continue;
        const auto fields = split_fields(lines[li]);
        if (fields.size() != expected_fields) {
            throw DataError("line " + line_no + ": expected " +
                            std::to_string(expected_fields) + " fields, got " +
                            std::to_string(fields.size()));
        }
        OhlcvRecord rec;
        const auto date = Date::try_parse(fields[0]);
        if (!date) {
            throw DataError("line " + line_no + ": bad date '" + std::string(fields[0]) + "'");
        }
        rec.date = *date;
        double* const prices[4] = {&rec.open, &rec.high, &rec.low, &rec.close};
        for (std::size_t f = 0; f < 4; ++f) {
            const auto v = parse_number(fields[f + 1]);
            if (!v) {
                throw DataError("line " + line_no + ": malformed number '" +
                                std::string(fields[f + 1]) + "'");
            }
            *prices[f] = *v;
        }
        const auto vol = parse_number(fields[volume_col]);
        if (!vol) {
            throw DataError("line " + line_no + ": malformed number '" +
                            std::string(fields[volume_col]) + "'");
        }
        rec.volume = *vol;
        if (rec.open <= 0 || rec.high <= 0 || rec.low <= 0 || rec.close <= 0) {
            throw DataError("line " + line_no + " (" + rec.date.to_string() +
                            "): non-positive price");
        }
        if (rec.volume < 0) {
            throw DataError("line " + line_no + " (" + rec.date.to_string() +
                            "): negative volume");
        }
        records.push_back(rec);
    }
    if (records.empty()) throw DataError("CSV has a header but no data rows");

    std::stable_sort(records.begin(), records.end(),
                     [](const OhlcvRecord& a, const OhlcvRecord& b) { return a.date < b.date; });
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (records[i].date == records[i - 1].date) {
            throw DataError("duplicate date " + records[i].date.to_string());
        }
    }
    for (const auto& rec : records) {
        const double lo = std::min(rec.open, rec.close);
        const double hi = std::max(rec.open, rec.close);
        if (rec.low > lo || rec.high < hi) {
            emit_warning(warn, "row " + rec.date.to_string() +
                                   ": high/low do not bracket open/close");
        }
    }
    return records;
}

std::vector<OhlcvRecord> load_csv(const std::string& path, const WarnFn& warn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_csv(buf.str(), warn);
}

ReturnsSeries to_returns(const std::vector<OhlcvRecord>& records) {
    if (records.size() < 2) {
        throw DataError("to_returns: need at least 2 records, got " +
                        std::to_string(records.size()));
    }
    for (std::size_t i = 1; i < records.size(); ++i) {
        if (!(records[i - 1].date < records[i].date)) {
            throw DataError("to_returns: records not strictly ascending at " +
                            records[i].date.to_string());
        }
    }

    const std::size_t n = records.size() - 1;
    ReturnsSeries series;
    series.raw = records;
    series.dates.reserve(n);
    series.inputs = Matrix(n, kNumFeatures);
    for (std::size_t t = 0; t < n; ++t) {
        const OhlcvRecord& prev = records[t];
        const OhlcvRecord& cur = records[t + 1];
        const double prev_fields[kNumFeatures] = {prev.open, prev.high, prev.low, prev.close,
                                                  prev.volume};
        const double cur_fields[kNumFeatures] = {cur.open, cur.high, cur.low, cur.close,
                                                 cur.volume};
        for (std::size_t f = 0; f < kNumFeatures; ++f) {
            if (prev_fields[f] == 0.0) {
                throw DataError("to_returns: zero " +
                                std::string(f == kVolume ? "volume" : "price") + " on " +
                                prev.date.to_string() + " divides the next row");
            }
            series.inputs(t, f) = cur_fields[f] / prev_fields[f] - 1.0;
        }
        series.dates.push_back(cur.date);
    }
    return series;
}

namespace {

// Rows [first, last] of `s` as a standalone series; raw keeps the extra
// leading record so the returns invariant still holds.
ReturnsSeries slice_series(const ReturnsSeries& s, std::size_t first, std::size_t last) {
    ReturnsSeries out;
    const std::size_t n = last - first + 1;
    out.dates.assign(s.dates.begin() + first, s.dates.begin() + last + 1);
    out.raw.assign(s.raw.begin() + first, s.raw.begin() + last + 2);
    out.inputs = Matrix(n, kNumFeatures);
    for (std::size_t t = 0; t < n; ++t) {
        const auto src = s.inputs.row(first + t);
        auto dst = out.inputs.row(t);
        std::copy(src.begin(), src.end(), dst.begin());
    }
    return out;
}

}  // namespace

ReturnsSeries slice_by_date(const ReturnsSeries& series, Date start, Date end) {
    if (!start.valid() || !end.valid()) {
        throw ContractError("slice_by_date: invalid date bound");
    }
    if (end < start) throw ContractError("slice_by_date: range end precedes start");
    const auto first = std::lower_bound(series.dates.begin(), series.dates.end(), start);
    const auto last = std::upper_bound(series.dates.begin(), series.dates.end(), end);
    if (first == last) {
        throw EmptySplitError("no return rows dated within " + start.to_string() + ".." +
                              end.to_string());
    }
    return slice_series(series, static_cast<std::size_t>(first - series.dates.begin()),
                        static_cast<std::size_t>(last - series.dates.begin()) - 1);
}

SplitResult split_by_date(const ReturnsSeries& series, Date train_start, Date train_end,
                          Date test_start, Date test_end) {
    for (const Date* d : {&train_start, &train_end, &test_start, &test_end}) {
        if (!d->valid()) throw ContractError("split_by_date: invalid date bound");
    }
    if (train_end < train_start || test_end < test_start) {
        throw ContractError("split_by_date: range end precedes start");
    }
    if (!(train_end < test_start || test_end < train_start)) {
        throw ContractError("split_by_date: train and test ranges overlap");
    }

    SplitResult result;
    try {
        result.train = slice_by_date(series, train_start, train_end);
    } catch (const EmptySplitError& e) {
        throw EmptySplitError(std::string("split_by_date: train side is empty: ") + e.what());
    }
    try {
        result.test = slice_by_date(series, test_start, test_end);
    } catch (const EmptySplitError& e) {
        throw EmptySplitError(std::string("split_by_date: test side is empty: ") + e.what());
    }
    return result;
}

std::vector<WindowSample> make_windows(const ReturnsSeries& series, std::size_t length,
                                       std::size_t stride) {
    if (length == 0) throw ContractError("make_windows: window length must be positive");
    if (stride == 0) throw ContractError("make_windows: stride must be positive");
    const std::size_t n = series.size();
    if (n < length + 1) {
        throw DataError("make_windows: series has " + std::to_string(n) +
                        " return rows; windows of length " + std::to_string(length) +
                        " need at least " + std::to_string(length + 1));
    }

    const std::size_t count = (n - length - 1) / stride + 1;
    std::vector<WindowSample> windows;
    windows.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t offset = w * stride;
        WindowSample sample{Matrix(length, kNumFeatures), Matrix(length, kNumTargets)};
        for (std::size_t j = 0; j < length; ++j) {
            const auto src = series.inputs.row(offset + j);
            auto xrow = sample.x.row(j);
            std::copy(src.begin(), src.end(), xrow.begin());
            const auto next = series.inputs.row(offset + j + 1);
            auto yrow = sample.y.row(j);
            std::copy(next.begin(), next.begin() + kNumTargets, yrow.begin());
        }
        windows.push_back(std::move(sample));
    }
    return windows;
}

std::vector<Batch> make_batches(const std::vector<WindowSample>& windows,
                                std::size_t batch_size, Rng& rng) {
    if (batch_size == 0) throw ContractError("make_batches: batch size must be positive");
    if (windows.empty()) throw ContractError("make_batches: no windows");

    std::vector<std::size_t> order(windows.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    for (std::size_t i = order.size() - 1; i > 0; --i) {
        const std::size_t j = rng.next_index(i + 1);
        std::swap(order[i], order[j]);
    }

    std::vector<Batch> batches;
    for (std::size_t pos = 0; pos < order.size(); pos += batch_size) {
        Batch batch;
        const std::size_t end = std::min(pos + batch_size, order.size());
        for (std::size_t k = pos; k < end; ++k) batch.push_back(windows[order[k]]);
        batches.push_back(std::move(batch));
    }
    return batches;
}

}  // namespace finlstm
