#pragma once

#include <stdexcept>
#include <string>

namespace spdnn {

// Root of every error thrown by the library. The CLI maps any of these to a
// nonzero exit code with the message printed.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class ShapeError : public Error {
public:
    using Error::Error;
};

class ArgumentError : public Error {
public:
    using Error::Error;
};

class NumericError : public Error {
public:
    using Error::Error;
};

class StabilityError : public Error {
public:
    using Error::Error;
};

class DivergenceError : public Error {
public:
    DivergenceError(const std::string& what, long epoch)
        : Error(what), epoch_(epoch) {}

    /// Epoch (1-based) or time index at which a non-finite value appeared.
    long epoch() const noexcept { return epoch_; }

private:
    long epoch_;
};

class BelowThresholdError : public Error {
public:
    BelowThresholdError(const std::string& what, double n0, double n_min)
        : Error(what), n0_(n0), n_min_(n_min) {}

    double n0() const noexcept { return n0_; }
    double n_min() const noexcept { return n_min_; }

private:
    double n0_;
    double n_min_;
};

class RootBracketError : public Error {
public:
    using Error::Error;
};

class RegimeError : public Error {
public:
    using Error::Error;
};

class TuningError : public Error {
public:
    using Error::Error;
};

class IngestionError : public Error {
public:
    IngestionError(const std::string& what, long row)
        : Error(what), row_(row) {}

    /// 1-based line number in the input file, or -1 when not row-specific.
    long row() const noexcept { return row_; }

private:
    long row_;
};

class InsufficientDataError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

}  // namespace spdnn
