// SPDX-License-Identifier: Apache-2.0
#include "faceset/report.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "faceset/error.hpp"

#ifndef FACESET_VERSION
#define FACESET_VERSION "0.0.0"
#endif

namespace faceset::report {

using nlohmann::json;

namespace {

void require_finite(const json& node, const std::string& where) {
    if (node.is_number_float() && !std::isfinite(node.get<double>())) {
        throw Error(ErrorCode::InvalidInput, "non-finite value at " + where);
    }
    if (node.is_object()) {
        for (const auto& [key, value] : node.items()) require_finite(value, where + "." + key);
    } else if (node.is_array()) {
        for (std::size_t i = 0; i < node.size(); ++i) require_finite(node[i], where + "[" + std::to_string(i) + "]");
    }
}

}  // namespace

std::string_view tool_version() { return FACESET_VERSION; }

double training_passes(std::uint64_t total_images, std::uint64_t dataset_size) {
    if (dataset_size == 0) throw Error(ErrorCode::InvalidInput, "dataset_size must be at least 1");
    if (total_images == 0) throw Error(ErrorCode::InvalidInput, "total_images must be at least 1");
    return static_cast<double>(total_images) / static_cast<double>(dataset_size);
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "'");

    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
        throw Error(ErrorCode::IoError, "SHA-256 initialisation failed");
    }
    std::array<char, 1 << 16> buffer{};
    while (in) {
        in.read(buffer.data(), buffer.size());
        if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

    std::string hex;
    hex.reserve(length * 2);
    for (unsigned int i = 0; i < length; ++i) {
        char byte[3];
        std::snprintf(byte, sizeof(byte), "%02x", digest[i]);
        hex += byte;
    }
    return hex;
}

json to_json(const metrics::InceptionScore& score) {
    return {{"mean", score.mean},
            {"variance", score.variance},
            {"splits", score.splits},
            {"split_scores", score.split_scores}};
}

json to_json(const metrics::VariabilityReport& report) {
    json bins = json::array();
    for (auto count : report.histogram) bins.push_back(count);
    return {{"pair_count", report.pair_count},
            {"mean", report.mean},
            {"variance", report.variance},
            {"min", report.min},
            {"max", report.max},
            {"histogram", {{"lower", 0.0},
                           {"upper", metrics::kMaxUnitSquaredDistance},
                           {"bins", metrics::kHistogramBins},
                           {"counts", std::move(bins)}}}};
}

json to_json(const metrics::MatchReport& report) {
    return {{"matching", report.matching},
            {"not_matching", report.not_matching},
            {"not_faces", report.not_faces},
            {"threshold", report.threshold}};
}

json to_json(const curator::CurationResult& result) {
    return {{"selected_ids", result.selected_ids},
            {"min_pairwise_distance", result.min_pairwise_distance},
            {"mean_pairwise_distance", result.mean_pairwise_distance}};
}

json to_json(const ingest::IngestSummary& summary) {
    json failures = json::array();
    for (const auto& f : summary.failures) {
        failures.push_back({{"id", f.id}, {"error", std::string(to_string(f.code))}, {"message", f.message}});
    }
    return {{"total", summary.total},
            {"produced", summary.produced},
            {"failed", summary.failed()},
            {"failed_by_class", summary.failures_by_class()},
            {"failures", std::move(failures)},
            {"produced_ids", summary.produced_ids}};
}

json to_json(const InputRecord& input) {
    return {{"path", input.path.generic_string()},
            {"sha256", input.sha256},
            {"rows", input.rows},
            {"cols", input.cols},
            {"valid_rows", input.valid_rows}};
}

json to_json(const EvalReport& report) {
    json inputs = json::object();
    for (const auto& input : report.inputs) inputs[input.role] = to_json(input);

    json out;
    out["tool_version"] = std::string(tool_version());
    out["inputs"] = std::move(inputs);
    out["defaults"] = {{"splits", report.defaults.splits},
                       {"splits_defaulted", report.defaults.splits_defaulted},
                       {"threshold", report.defaults.threshold},
                       {"threshold_defaulted", report.defaults.threshold_defaulted},
                       {"regularization_fired", report.defaults.regularization_fired}};
    out["inception"] = report.inception ? to_json(*report.inception) : json(nullptr);
    if (report.fid) {
        out["fid"] = report.fid->value;
    } else {
        out["fid"] = nullptr;
    }
    out["variability"] = report.variability ? to_json(*report.variability) : json(nullptr);
    out["match"] = report.match ? to_json(*report.match) : json(nullptr);
    require_finite(out, "report");
    return out;
}

}  // namespace faceset::report
