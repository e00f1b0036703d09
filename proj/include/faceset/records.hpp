// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <vector>

namespace faceset::ingest {

// FSRC record container, all integers little-endian:
//   "FSRC" | u32 version
//   repeated: u64 payload length | payload | u32 CRC-32 (IEEE) of payload
inline constexpr std::array<std::uint8_t, 4> kRecordMagic{0x46, 0x53, 0x52, 0x43};
inline constexpr std::uint32_t kRecordVersion = 1;
inline constexpr std::size_t kRecordHeaderSize = 8;

// Reflected CRC-32, polynomial 0xEDB88320, as used by zlib and PNG.
std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t crc = 0);

class RecordWriter {
public:
    explicit RecordWriter(const std::filesystem::path& path);

    void append(std::span<const std::uint8_t> payload);
    std::size_t count() const { return count_; }
    // Flushes and closes; throws IoError if anything failed to reach the file.
    void close();

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t count_ = 0;
};

/// Sequential reader over an FSRC file. Only the current record is held in
/// memory, so arbitrarily large files can be streamed.
class RecordReader {
public:
    explicit RecordReader(const std::filesystem::path& path);

    /// Reads the next payload into `payload`, reusing its capacity.
    /// Returns false at a clean end of file.
    bool next(std::vector<std::uint8_t>& payload);

    std::size_t index() const { return index_; }

private:
    std::filesystem::path path_;
    std::ifstream in_;
    std::uintmax_t remaining_ = 0;
    std::size_t index_ = 0;
};

std::size_t write_records(std::span<const std::vector<std::uint8_t>> payloads,
                          const std::filesystem::path& path);

std::vector<std::vector<std::uint8_t>> read_records(const std::filesystem::path& path);

}  // namespace faceset::ingest
