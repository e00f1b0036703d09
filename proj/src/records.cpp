// SPDX-License-Identifier: Apache-2.0
#include "faceset/records.hpp"

#include <algorithm>
#include <string>

#include "byte_order.hpp"
#include "faceset/error.hpp"

namespace faceset::ingest {

namespace {

constexpr std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t n = 0; n < 256; ++n) {
        std::uint32_t c = n;
        for (int k = 0; k < 8; ++k) c = (c & 1u) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[n] = c;
    }
    return table;
}

constexpr auto kCrcTable = make_crc_table();

template <std::size_t N>
void write_bytes(std::ofstream& out, const std::array<std::uint8_t, N>& bytes) {
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(N));
}

bool read_exact(std::ifstream& in, std::uint8_t* dst, std::size_t n) {
    in.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
    return static_cast<std::size_t>(in.gcount()) == n;
}

}  // namespace

std::uint32_t crc32(std::span<const std::uint8_t> data, std::uint32_t crc) {
    crc = ~crc;
    for (std::uint8_t byte : data) crc = kCrcTable[(crc ^ byte) & 0xFFu] ^ (crc >> 8);
    return ~crc;
}

RecordWriter::RecordWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
    if (!out_) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    write_bytes(out_, kRecordMagic);
    write_bytes(out_, detail::to_le(kRecordVersion));
    if (!out_) throw Error(ErrorCode::IoError, "failed writing header to '" + path.string() + "'");
}

void RecordWriter::append(std::span<const std::uint8_t> payload) {
    write_bytes(out_, detail::to_le(static_cast<std::uint64_t>(payload.size())));
    out_.write(reinterpret_cast<const char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
    write_bytes(out_, detail::to_le(crc32(payload)));
    if (!out_) throw Error(ErrorCode::IoError, "failed writing record to '" + path_.string() + "'");
    ++count_;
}

void RecordWriter::close() {
    out_.flush();
    if (!out_) throw Error(ErrorCode::IoError, "failed flushing '" + path_.string() + "'");
    out_.close();
    if (out_.fail()) throw Error(ErrorCode::IoError, "failed closing '" + path_.string() + "'");
}

RecordReader::RecordReader(const std::filesystem::path& path) : path_(path), in_(path, std::ios::binary) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(path, ec);
    if (!in_ || ec) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");

    std::array<std::uint8_t, kRecordHeaderSize> header{};
    const std::size_t available = static_cast<std::size_t>(std::min<std::uintmax_t>(size, header.size()));
    if (!read_exact(in_, header.data(), available)) {
        throw Error(ErrorCode::IoError, "failed reading '" + path.string() + "'");
    }
    if (!std::equal(header.begin(), header.begin() + std::min<std::size_t>(available, 4), kRecordMagic.begin())) {
        throw Error(ErrorCode::FormatError, "'" + path.string() + "' is not an FSRC record file");
    }
    if (available < header.size()) {
        throw Error(ErrorCode::TruncatedFile, "'" + path.string() + "' ends inside the file header");
    }
    const auto version = detail::from_le<std::uint32_t>(header.data() + 4);
    if (version != kRecordVersion) {
        throw Error(ErrorCode::FormatError, "unsupported FSRC version " + std::to_string(version));
    }
    remaining_ = size - header.size();
}

bool RecordReader::next(std::vector<std::uint8_t>& payload) {
    if (remaining_ == 0) return false;
    const std::string where = "record " + std::to_string(index_) + " of '" + path_.string() + "'";
    if (remaining_ < 8) throw Error(ErrorCode::TruncatedFile, where + " has a truncated length prefix");

    std::array<std::uint8_t, 8> prefix{};
    if (!read_exact(in_, prefix.data(), prefix.size())) {
        throw Error(ErrorCode::TruncatedFile, where + " has a truncated length prefix");
    }
    remaining_ -= prefix.size();
    const auto length = detail::from_le<std::uint64_t>(prefix.data());
    if (remaining_ < 4 || length > remaining_ - 4) {
        throw Error(ErrorCode::TruncatedFile, where + " declares " + std::to_string(length) +
                                                  " bytes but the file ends early");
    }
    payload.resize(static_cast<std::size_t>(length));
    std::array<std::uint8_t, 4> stored{};
    if (!read_exact(in_, payload.data(), payload.size()) || !read_exact(in_, stored.data(), stored.size())) {
        throw Error(ErrorCode::TruncatedFile, where + " is truncated");
    }
    remaining_ -= length + 4;
    if (detail::from_le<std::uint32_t>(stored.data()) != crc32(payload)) {
        throw CorruptRecordError(index_, where + " failed its CRC-32 check");
    }
    ++index_;
    return true;
}

std::size_t write_records(std::span<const std::vector<std::uint8_t>> payloads,
                          const std::filesystem::path& path) {
    RecordWriter writer(path);
    for (const auto& payload : payloads) writer.append(payload);
    writer.close();
    return writer.count();
}

std::vector<std::vector<std::uint8_t>> read_records(const std::filesystem::path& path) {
    RecordReader reader(path);
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> payload;
    while (reader.next(payload)) out.push_back(payload);
    return out;
}

}  // namespace faceset::ingest
