// SPDX-License-Identifier: Apache-2.0
#include "faceset/error.hpp"

#include <utility>

namespace faceset {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::InsufficientSamples: return "InsufficientSamples";
        case ErrorCode::NotSymmetric: return "NotSymmetric";
        case ErrorCode::NotPSD: return "NotPSD";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::InvalidSplit: return "InvalidSplit";
        case ErrorCode::DegenerateEmbedding: return "DegenerateEmbedding";
        case ErrorCode::InsufficientReference: return "InsufficientReference";
        case ErrorCode::InvalidK: return "InvalidK";
        case ErrorCode::PoolTooLarge: return "PoolTooLarge";
        case ErrorCode::CropOutOfBounds: return "CropOutOfBounds";
        case ErrorCode::DecodeError: return "DecodeError";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::FormatError: return "FormatError";
        case ErrorCode::CorruptRecord: return "CorruptRecord";
        case ErrorCode::TruncatedFile: return "TruncatedFile";
    }
    return "Unknown";
}

bool is_numeric_failure(ErrorCode code) {
    switch (code) {
        case ErrorCode::NotSymmetric:
        case ErrorCode::NotPSD:
        case ErrorCode::DegenerateEmbedding:
            return true;
        default:
            return false;
    }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

CorruptRecordError::CorruptRecordError(std::size_t index, const std::string& message)
    : Error(ErrorCode::CorruptRecord, message), index_(index) {}

DegenerateEmbeddingError::DegenerateEmbeddingError(std::string id)
    : Error(ErrorCode::DegenerateEmbedding, "zero-norm embedding row '" + id + "'"),
      id_(std::move(id)) {}

}  // namespace faceset
