#include "humatch/error.hpp"

namespace humatch {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::Io: return "io-error";
        case ErrorCode::MalformedHeader: return "malformed-header";
        case ErrorCode::MaxvalOutOfRange: return "maxval-out-of-range";
        case ErrorCode::TruncatedPayload: return "truncated-payload";
        case ErrorCode::MalformedPayload: return "malformed-payload";
        case ErrorCode::OutOfBounds: return "out-of-bounds";
        case ErrorCode::InvalidArgument: return "invalid-argument";
        case ErrorCode::Overflow: return "overflow";
        case ErrorCode::MalformedXml: return "malformed-xml";
        case ErrorCode::UnsupportedFeatureType: return "unsupported-feature-type";
        case ErrorCode::NonStumpTree: return "non-stump-tree";
        case ErrorCode::EmptyHistogram: return "empty-histogram";
        case ErrorCode::EmptyRegion: return "empty-region";
        case ErrorCode::ZeroMass: return "zero-mass";
        case ErrorCode::LabelMismatch: return "label-mismatch";
        case ErrorCode::EmptyGallery: return "empty-gallery";
        case ErrorCode::MalformedRecord: return "malformed-record";
        case ErrorCode::DuplicateSubject: return "duplicate-subject";
        case ErrorCode::NonFiniteValue: return "non-finite-value";
        case ErrorCode::EmptySignature: return "empty-signature";
    }
    return "unknown";
}

}  // namespace humatch
