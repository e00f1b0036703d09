// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "faceset/curator.hpp"
#include "faceset/manifest.hpp"
#include "faceset/metrics.hpp"
#include "json.hpp"

namespace faceset::report {

std::string_view tool_version();

/// How many times a training run that consumes `total_images` samples
/// revisits a dataset of `dataset_size` images.
double training_passes(std::uint64_t total_images, std::uint64_t dataset_size);

// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

struct InputRecord {
    std::string role;
    std::filesystem::path path;
    std::string sha256;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t valid_rows = 0;
};

nlohmann::json to_json(const metrics::InceptionScore& score);
nlohmann::json to_json(const metrics::VariabilityReport& report);
nlohmann::json to_json(const metrics::MatchReport& report);
nlohmann::json to_json(const curator::CurationResult& result);
nlohmann::json to_json(const ingest::IngestSummary& summary);
nlohmann::json to_json(const InputRecord& input);

struct EvalDefaults {
    std::size_t splits = metrics::kDefaultSplits;
    bool splits_defaulted = true;
    double threshold = metrics::kDefaultMatchThreshold;
    bool threshold_defaulted = true;
    bool regularization_fired = false;
};

struct EvalReport {
    std::optional<metrics::InceptionScore> inception;
    std::optional<metrics::FidResult> fid;
    std::optional<metrics::VariabilityReport> variability;
    std::optional<metrics::MatchReport> match;
    std::vector<InputRecord> inputs;
    EvalDefaults defaults;
};

/// Absent metrics serialize as null so the key set never changes.
/// Throws InvalidInput if any reported number is non-finite.
nlohmann::json to_json(const EvalReport& report);

}  // namespace faceset::report
