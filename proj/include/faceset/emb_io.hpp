// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <variant>

#include "faceset/dataset.hpp"

namespace faceset::ingest {

// EMB1 interchange file, all integers little-endian:
//   "EMB1" | u32 version | u32 N | u32 D | u8 normalized | u8 kind | u16 reserved
//   N*D float32 row-major
//   u32 metadata length | UTF-8 JSON {"ids": [...], "face_found": [...]}
inline constexpr std::array<std::uint8_t, 4> kEmbeddingMagic{0x45, 0x4D, 0x42, 0x31};
inline constexpr std::uint32_t kEmbeddingVersion = 1;

enum class MatrixKind : std::uint8_t { Features = 0, Probabilities = 1 };

using MatrixFile = std::variant<EmbeddingSet, ClassProbabilitySet>;

// Values are narrowed to float32 on write.
void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
void write_embeddings(const ClassProbabilitySet& set, const std::filesystem::path& path);

// Either kind; values widen to double.
MatrixFile read_matrix_file(const std::filesystem::path& path);

// Throw FormatError when the file holds the other kind.
EmbeddingSet read_embeddings(const std::filesystem::path& path);
ClassProbabilitySet read_probabilities(const std::filesystem::path& path);

}  // namespace faceset::ingest
