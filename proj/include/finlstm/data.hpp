#pragma once

#include <compare>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "finlstm/matrix.hpp"
#include "finlstm/rng.hpp"

namespace finlstm {

struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    auto operator<=>(const Date&) const = default;

    static Date parse(std::string_view iso);                 // throws DataError
    static std::optional<Date> try_parse(std::string_view iso);
    std::string to_string() const;                           // YYYY-MM-DD
    bool valid() const;
};

struct OhlcvRecord {
    Date date;
    double open = 0, high = 0, low = 0, close = 0, volume = 0;
};

// Warning sink. Unset means stderr; tests pass a collector.
using WarnFn = std::function<void(const std::string&)>;
void emit_warning(const WarnFn& warn, const std::string& msg);

/// Parses a Yahoo-style daily export:
///   Date,Open,High,Low,Close,Adj Close,Volume   (Adj Close optional, ignored)
/// Dates are ISO YYYY-MM-DD; records come back sorted ascending. Duplicate
/// dates, non-positive prices, negative volume, and malformed fields are hard
/// errors naming the offending line or date. Rows whose high/low do not
/// bracket open/close only draw a warning; real feeds violate that ordering.
std::vector<OhlcvRecord> parse_csv(std::string_view text, const WarnFn& warn = {});

/// parse_csv over the contents of a file.
std::vector<OhlcvRecord> load_csv(const std::string& path, const WarnFn& warn = {});

// Feature column order of the returns matrix.
inline constexpr std::size_t kOpen = 0, kHigh = 1, kLow = 2, kClose = 3, kVolume = 4;
inline constexpr std::size_t kNumFeatures = 5;
inline constexpr std::size_t kNumTargets = 4;  // next-day O,H,L,C

/// Daily percentage-change returns. Row t holds raw[t+1]/raw[t] - 1 for each
/// of the five fields and is dated at raw[t+1].date, so N records yield N-1
/// return rows.
struct ReturnsSeries {
    std::vector<Date> dates;        // one per return row
    Matrix inputs;                  // N x 5, columns O,H,L,C,V
    std::vector<OhlcvRecord> raw;   // the N+1 source records

    std::size_t size() const { return dates.size(); }
};

/// Converts records (ascending, >= 2 of them) to returns. A zero volume in
/// any divisor row is a hard error naming the date: the feed must be cleaned,
/// not patched.
ReturnsSeries to_returns(const std::vector<OhlcvRecord>& records);

/// Return rows dated within [start, end] as a standalone series. An empty
/// selection is an EmptySplitError.
ReturnsSeries slice_by_date(const ReturnsSeries& series, Date start, Date end);

struct SplitResult {
    ReturnsSeries train;
    ReturnsSeries test;
};

/// Partitions return rows by their own date, bounds inclusive. The two ranges
/// must not overlap; rows outside both ranges are dropped. Either side coming
/// up empty is an EmptySplitError naming the side.
SplitResult split_by_date(const ReturnsSeries& series, Date train_start, Date train_end,
                          Date test_start, Date test_end);

/// One training window: `length` days of 5-feature returns paired with the
/// next day's O,H,L,C returns per row.
struct WindowSample {
    Matrix x;  // length x 5
    Matrix y;  // length x 4
};

/// Sliding windows at offsets 0, stride, 2*stride, ... while offset+length+1
/// rows remain (the targets consume one look-ahead row). Count is
/// floor((N - length - 1) / stride) + 1.
std::vector<WindowSample> make_windows(const ReturnsSeries& series, std::size_t length,
                                       std::size_t stride = 1);

using Batch = std::vector<WindowSample>;

/// Seeded shuffle (Fisher-Yates driven by rng), then chunks of batch_size;
/// the final batch may be smaller.
std::vector<Batch> make_batches(const std::vector<WindowSample>& windows,
                                std::size_t batch_size, Rng& rng);

}  // namespace finlstm
