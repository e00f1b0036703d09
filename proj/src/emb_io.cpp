// SPDX-License-Identifier: Apache-2.0
#include "faceset/emb_io.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "byte_order.hpp"
#include "faceset/error.hpp"
#include "json.hpp"

namespace faceset::ingest {

namespace {

constexpr std::size_t kHeaderSize = 20;

void append(std::vector<std::uint8_t>& out, std::span<const std::uint8_t> bytes) {
    out.insert(out.end(), bytes.begin(), bytes.end());
}

void write_file(const RowMatrix& matrix, const std::vector<std::string>& ids,
                const std::vector<bool>& face_found, bool normalized, MatrixKind kind,
                const std::filesystem::path& path) {
    if (ids.size() != static_cast<std::size_t>(matrix.rows()) || face_found.size() != ids.size()) {
        throw Error(ErrorCode::InvalidInput, "ids / face_found length does not match row count");
    }
    constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
    if (static_cast<std::uint64_t>(matrix.rows()) > kMax || static_cast<std::uint64_t>(matrix.cols()) > kMax) {
        throw Error(ErrorCode::InvalidInput, "matrix too large for the EMB1 format");
    }

    std::vector<std::uint8_t> bytes;
    bytes.reserve(kHeaderSize + static_cast<std::size_t>(matrix.size()) * 4 + 64 * ids.size());
    append(bytes, kEmbeddingMagic);
    append(bytes, detail::to_le(kEmbeddingVersion));
    append(bytes, detail::to_le(static_cast<std::uint32_t>(matrix.rows())));
    append(bytes, detail::to_le(static_cast<std::uint32_t>(matrix.cols())));
    bytes.push_back(normalized ? 1 : 0);
    bytes.push_back(static_cast<std::uint8_t>(kind));
    append(bytes, detail::to_le(std::uint16_t{0}));
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c) {
            append(bytes, detail::float_to_le(static_cast<float>(matrix(r, c))));
        }
    }

    nlohmann::json meta;
    meta["ids"] = ids;
    meta["face_found"] = face_found;
    const std::string text = meta.dump();
    append(bytes, detail::to_le(static_cast<std::uint32_t>(text.size())));
    bytes.insert(bytes.end(), text.begin(), text.end());

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "failed writing '" + path.string() + "'");
}

[[noreturn]] void format_error(const std::filesystem::path& path, const std::string& what) {
    throw Error(ErrorCode::FormatError, "'" + path.string() + "': " + what);
}

}  // namespace

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
    write_file(set.matrix, set.ids, set.face_found, set.normalized, MatrixKind::Features, path);
}

void write_embeddings(const ClassProbabilitySet& set, const std::filesystem::path& path) {
    write_file(set.matrix, set.ids, std::vector<bool>(set.ids.size(), true), false,
               MatrixKind::Probabilities, path);
}

MatrixFile read_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());

    if (bytes.size() < kHeaderSize) format_error(path, "file shorter than the EMB1 header");
    if (!std::equal(kEmbeddingMagic.begin(), kEmbeddingMagic.end(), bytes.begin())) {
        format_error(path, "bad magic, not an EMB1 file");
    }
    const auto version = detail::from_le<std::uint32_t>(&bytes[4]);
    if (version != kEmbeddingVersion) format_error(path, "unsupported version " + std::to_string(version));
    const auto n = detail::from_le<std::uint32_t>(&bytes[8]);
    const auto d = detail::from_le<std::uint32_t>(&bytes[12]);
    const std::uint8_t normalized = bytes[16];
    const std::uint8_t kind = bytes[17];
    if (normalized > 1) format_error(path, "normalized flag must be 0 or 1");
    if (kind > 1) format_error(path, "unknown matrix kind " + std::to_string(kind));
    if (detail::from_le<std::uint16_t>(&bytes[18]) != 0) format_error(path, "reserved field is not zero");

    const std::uint64_t payload = static_cast<std::uint64_t>(n) * d * 4;
    if (bytes.size() - kHeaderSize < payload + 4) format_error(path, "file ends inside the float payload");
    const std::size_t meta_at = kHeaderSize + static_cast<std::size_t>(payload);
    const auto meta_len = detail::from_le<std::uint32_t>(&bytes[meta_at]);
    if (bytes.size() - meta_at - 4 != meta_len) format_error(path, "metadata length does not match file size");

    RowMatrix matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    const std::uint8_t* cursor = &bytes[kHeaderSize];
    for (Eigen::Index r = 0; r < matrix.rows(); ++r) {
        for (Eigen::Index c = 0; c < matrix.cols(); ++c, cursor += 4) {
            matrix(r, c) = static_cast<double>(detail::float_from_le(cursor));
        }
    }

    nlohmann::json meta;
    try {
        meta = nlohmann::json::parse(bytes.begin() + static_cast<std::ptrdiff_t>(meta_at + 4), bytes.end());
    } catch (const nlohmann::json::exception& e) {
        format_error(path, std::string("malformed metadata JSON: ") + e.what());
    }
    if (!meta.is_object() || !meta.contains("ids") || !meta["ids"].is_array()) {
        format_error(path, "metadata must be an object with an \"ids\" array");
    }
    std::vector<std::string> ids;
    std::vector<bool> face_found;
    try {
        ids = meta["ids"].get<std::vector<std::string>>();
        if (meta.contains("face_found")) {
            face_found = meta["face_found"].get<std::vector<bool>>();
        } else {
            face_found.assign(ids.size(), true);
        }
    } catch (const nlohmann::json::exception& e) {
        format_error(path, std::string("bad metadata field types: ") + e.what());
    }
    if (ids.size() != n) {
        format_error(path, "header declares N=" + std::to_string(n) + " but metadata lists " +
                               std::to_string(ids.size()) + " ids");
    }
    if (face_found.size() != n) format_error(path, "face_found length does not match N");

    if (static_cast<MatrixKind>(kind) == MatrixKind::Probabilities) {
        ClassProbabilitySet set{std::move(ids), std::move(matrix)};
        return set;
    }
    EmbeddingSet set;
    set.ids = std::move(ids);
    set.matrix = std::move(matrix);
    set.normalized = normalized == 1;
    set.face_found = std::move(face_found);
    try {
        set.validate();
    } catch (const Error& e) {
        format_error(path, e.what());
    }
    if (set.normalized) {
        const double deviation = set.max_unit_norm_deviation();
        if (deviation > 1e-4) {
            spdlog::warn("'{}' claims unit-norm rows but a row deviates by {:.3g}", path.string(), deviation);
        }
    }
    return set;
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
    MatrixFile file = read_matrix_file(path);
    if (auto* set = std::get_if<EmbeddingSet>(&file)) return std::move(*set);
    format_error(path, "expected a feature matrix (kind 0), found probabilities");
}

ClassProbabilitySet read_probabilities(const std::filesystem::path& path) {
    MatrixFile file = read_matrix_file(path);
    if (auto* set = std::get_if<ClassProbabilitySet>(&file)) {
        return std::move(*set);
    }
    format_error(path, "expected a probability matrix (kind 1), found features");
}

}  // namespace faceset::ingest
