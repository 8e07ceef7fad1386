#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace ddoco {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

enum class ErrorCode {
    kInvalidArgument,
    kDimensionMismatch,
    kDepthOutOfRange,
    kIndexOutOfRange,
    kPersistencyViolation,
    kDataTooShort,
    kDegenerateData,
    kInfeasible,
    kNonConvergence,
    kHorizonExceeded,
    kParse,
    kConfig,
};

const char* to_string(ErrorCode code);

/// Error type thrown by every module. The code identifies the failure class,
/// the message carries the details.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace ddoco
