#pragma once

#include <stdexcept>
#include <string>

namespace catapult {

// One exception type per named failure mode; callers catch the base when
// they only care about "bad input vs. everything else".
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct EmptyDatasetError : Error {
    EmptyDatasetError() : Error("dataset: point list is empty") {}
};
struct NonpositiveWeightError : Error {
    explicit NonpositiveWeightError(double p)
        : Error("dataset: negative weight " + std::to_string(p)) {}
};
struct NonpositiveEtaError : Error {
    explicit NonpositiveEtaError(double eta)
        : Error("dataset: learning rate must be > 0, got " + std::to_string(eta)) {}
};
struct AllZeroDataError : Error {
    AllZeroDataError() : Error("dataset: all data values are zero") {}
};

struct ShiftTooLargeError : Error {
    explicit ShiftTooLargeError(double bmax)
        : Error("shifted bases violate max_i b_i+ < 4 (got " + std::to_string(bmax) + ")") {}
};
struct NoRootError : Error {
    NoRootError() : Error("shifted log-drift is nonnegative; no positive root") {}
};
struct NotInflationaryError : Error {
    explicit NotInflationaryError(const std::string& what) : Error("not inflationary: " + what) {}
};
struct DegenerateIntervalError : Error {
    DegenerateIntervalError() : Error("interval [lambda_plus, lambda0] is empty") {}
};
struct NonpositiveDeltaError : Error {
    NonpositiveDeltaError() : Error("delta must be > 0") {}
};

struct InfeasibleInitError : Error {
    explicit InfeasibleInitError(const std::string& what) : Error("infeasible init: " + what) {}
};
struct InsufficientPointsError : Error {
    InsufficientPointsError() : Error("exponent fit needs >= 3 ladder points with p_hat > 0") {}
};

struct JsonSchemaError : Error {
    explicit JsonSchemaError(const std::string& what) : Error("json: " + what) {}
};

}  // namespace catapult
