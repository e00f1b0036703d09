// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace faceset {

enum class ErrorCode {
    InvalidInput,
    InsufficientSamples,
    NotSymmetric,
    NotPSD,
    DimensionMismatch,
    InvalidSplit,
    DegenerateEmbedding,
    InsufficientReference,
    InvalidK,
    PoolTooLarge,
    CropOutOfBounds,
    DecodeError,
    IoError,
    FormatError,
    CorruptRecord,
    TruncatedFile,
};

std::string_view to_string(ErrorCode code);

// Numeric failures map to CLI exit code 3; everything else is an input error.
bool is_numeric_failure(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message);

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// Raised by the record reader; carries the zero-based record index.
class CorruptRecordError : public Error {
public:
    CorruptRecordError(std::size_t index, const std::string& message);

    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Raised when a valid row has zero norm and cannot be normalized.
class DegenerateEmbeddingError : public Error {
public:
    DegenerateEmbeddingError(std::string id);

    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

}  // namespace faceset
