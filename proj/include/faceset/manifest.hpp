// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "faceset/error.hpp"
#include "faceset/image.hpp"

namespace faceset::ingest {

struct ManifestEntry {
    std::string id;
    std::filesystem::path source_path;  // resolved against the manifest directory
    std::optional<std::size_t> frame_index;
    std::optional<CropRect> crop;
    std::optional<std::vector<std::pair<double, double>>> landmarks;
};

/// JSON document of the form
///   {"entries": [{"id": "...", "source_path": "...", "frame_index": 12,
///                 "crop": {"x": 0, "y": 0, "width": 64, "height": 64},
///                 "landmarks": [[x, y], ...]}, ...]}
/// Only "id" and "source_path" are required.
struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    const ManifestEntry* find(const std::string& id) const;
};

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir = {});
DatasetManifest load_manifest(const std::filesystem::path& path);
std::string dump_manifest(const DatasetManifest& manifest);

// Explicit crop, else the landmark bounding box clipped to the image, else
// the whole frame. Explicit crops are never clipped.
CropRect effective_crop(const ManifestEntry& entry, const Raster& image);

struct IngestOptions {
    std::size_t size = 256;
    Resample resample = Resample::Bilinear;
    std::optional<std::filesystem::path> image_dir;    // write <id>.png files here
    std::optional<std::filesystem::path> records_path; // FSRC of PNG payloads
};

struct IngestFailure {
    std::string id;
    ErrorCode code;
    std::string message;
};

struct IngestSummary {
    std::size_t total = 0;
    std::size_t produced = 0;
    std::vector<std::string> produced_ids;
    std::vector<IngestFailure> failures;

    std::size_t failed() const { return failures.size(); }
    std::map<std::string, std::size_t> failures_by_class() const;
};

/// Crops and resizes every entry. Per-entry problems are collected in the
/// summary; failing to create an output (directory, record file) throws
/// IoError.
IngestSummary run_ingest(const DatasetManifest& manifest, const IngestOptions& options);

}  // namespace faceset::ingest
