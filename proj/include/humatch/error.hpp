#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace humatch {

enum class ErrorCode {
    Io,
    MalformedHeader,
    MaxvalOutOfRange,
    TruncatedPayload,
    MalformedPayload,
    OutOfBounds,
    InvalidArgument,
    Overflow,
    MalformedXml,
    UnsupportedFeatureType,
    NonStumpTree,
    EmptyHistogram,
    EmptyRegion,
    ZeroMass,
    LabelMismatch,
    EmptyGallery,
    MalformedRecord,
    DuplicateSubject,
    NonFiniteValue,
    EmptySignature,
};

/// Stable kebab-case name, used in CLI messages and by the Python bindings.
std::string_view to_string(ErrorCode code) noexcept;

/// All library failures are reported as this exception. The message already
/// carries the location detail (byte offset, element path, line number).
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace humatch
