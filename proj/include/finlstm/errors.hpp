#pragma once

#include <stdexcept>
#include <string>

namespace finlstm {

// Violated call contract: mismatched shapes, out-of-range arguments.
class ContractError : public std::invalid_argument {
public:
    explicit ContractError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Numerical failure: exceeded iteration caps, non-finite values mid-run.
class NumericError : public std::runtime_error {
public:
    explicit NumericError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rejected input data: malformed CSV, bad dates, unusable series.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

// A date split that left one side without any rows.
class EmptySplitError : public DataError {
public:
    explicit EmptySplitError(const std::string& msg) : DataError(msg) {}
};

// Unreadable, truncated, or internally inconsistent checkpoint.
class CheckpointError : public std::runtime_error {
public:
    explicit CheckpointError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace finlstm
