#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace exagg {

enum class ErrorCode {
    // ingestion
    MissingColumn,
    OutOfRangeLevel,
    UnknownEnum,
    DuplicateId,
    ParseError,
    MissingField,
    DanglingReference,
    // labeling
    KindMismatch,
    RefMismatch,
    OutOfRange,
    // analysis
    EmptyGroup,
    EmptyBucket,
    MissingPublishDate,
    EmptyTimeline,
    UnknownUser,
    // learning
    TooFewSamplesPerClass,
    SingleClass,
    DegenerateFeature,
    LengthMismatch,
    EmptyInput,
    // cli
    ConfigError,
    IoError,
};

inline std::string_view error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::MissingColumn: return "MissingColumn";
        case ErrorCode::OutOfRangeLevel: return "OutOfRangeLevel";
        case ErrorCode::UnknownEnum: return "UnknownEnum";
        case ErrorCode::DuplicateId: return "DuplicateId";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::MissingField: return "MissingField";
        case ErrorCode::DanglingReference: return "DanglingReference";
        case ErrorCode::KindMismatch: return "KindMismatch";
        case ErrorCode::RefMismatch: return "RefMismatch";
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::EmptyGroup: return "EmptyGroup";
        case ErrorCode::EmptyBucket: return "EmptyBucket";
        case ErrorCode::MissingPublishDate: return "MissingPublishDate";
        case ErrorCode::EmptyTimeline: return "EmptyTimeline";
        case ErrorCode::UnknownUser: return "UnknownUser";
        case ErrorCode::TooFewSamplesPerClass: return "TooFewSamplesPerClass";
        case ErrorCode::SingleClass: return "SingleClass";
        case ErrorCode::DegenerateFeature: return "DegenerateFeature";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyInput: return "EmptyInput";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

/// Exception carrying a machine-readable error code next to the human message.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
          code_(code) {}

    ErrorCode code() const { return code_; }

private:
    ErrorCode code_;
};

/// One rejected input row. Ingestion collects these instead of aborting so
/// that count(valid) + count(errors) always equals count(input rows).
struct RowError {
    std::uint64_t line = 0;  // 1-based line/row number in the source file
    ErrorCode code = ErrorCode::ParseError;
    std::string message;
};

}  // namespace exagg
