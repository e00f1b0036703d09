// SPDX-License-Identifier: Apache-2.0
#include "faceset/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <set>

#include <spdlog/spdlog.h>

#include "faceset/records.hpp"
#include "json.hpp"

namespace faceset::ingest {

namespace {

using nlohmann::json;

[[noreturn]] void manifest_error(const std::string& what) {
    throw Error(ErrorCode::FormatError, "manifest: " + what);
}

std::size_t non_negative(const json& value, const std::string& field) {
    if (!value.is_number_integer() || value.get<long long>() < 0) {
        manifest_error("field '" + field + "' must be a non-negative integer");
    }
    return value.get<std::size_t>();
}

ManifestEntry parse_entry(const json& item, const std::filesystem::path& base_dir) {
    if (!item.is_object()) manifest_error("entries must be objects");
    if (!item.contains("id") || !item["id"].is_string()) manifest_error("entry without a string 'id'");
    ManifestEntry entry;
    entry.id = item["id"].get<std::string>();
    if (!item.contains("source_path") || !item["source_path"].is_string()) {
        manifest_error("entry '" + entry.id + "' has no string 'source_path'");
    }
    std::filesystem::path source = item["source_path"].get<std::string>();
    entry.source_path = source.is_absolute() || base_dir.empty() ? source : base_dir / source;

    if (item.contains("frame_index") && !item["frame_index"].is_null()) {
        entry.frame_index = non_negative(item["frame_index"], "frame_index");
    }
    if (item.contains("crop") && !item["crop"].is_null()) {
        const json& crop = item["crop"];
        if (!crop.is_object()) manifest_error("entry '" + entry.id + "' crop must be an object");
        for (const char* key : {"x", "y", "width", "height"}) {
            if (!crop.contains(key)) manifest_error("entry '" + entry.id + "' crop lacks '" + key + "'");
        }
        CropRect rect{non_negative(crop["x"], "crop.x"), non_negative(crop["y"], "crop.y"),
                      non_negative(crop["width"], "crop.width"), non_negative(crop["height"], "crop.height")};
        if (rect.width == 0 || rect.height == 0) {
            manifest_error("entry '" + entry.id + "' crop must have positive width and height");
        }
        entry.crop = rect;
    }
    if (item.contains("landmarks") && !item["landmarks"].is_null()) {
        const json& points = item["landmarks"];
        if (!points.is_array()) manifest_error("entry '" + entry.id + "' landmarks must be an array");
        std::vector<std::pair<double, double>> parsed;
        for (const json& p : points) {
            if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
                manifest_error("entry '" + entry.id + "' landmarks must be [x, y] pairs");
            }
            parsed.emplace_back(p[0].get<double>(), p[1].get<double>());
        }
        entry.landmarks = std::move(parsed);
    }
    return entry;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
}

}  // namespace

const ManifestEntry* DatasetManifest::find(const std::string& id) const {
    for (const auto& entry : entries) {
        if (entry.id == id) return &entry;
    }
    return nullptr;
}

DatasetManifest parse_manifest(const std::string& text, const std::filesystem::path& base_dir) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        manifest_error(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array()) {
        manifest_error("top level must be an object with an 'entries' array");
    }
    DatasetManifest manifest;
    std::set<std::string> seen;
    for (const json& item : doc["entries"]) {
        ManifestEntry entry = parse_entry(item, base_dir);
        if (!seen.insert(entry.id).second) manifest_error("duplicate id '" + entry.id + "'");
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "cannot open manifest '" + path.string() + "'");
    const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_manifest(text, path.parent_path());
}

std::string dump_manifest(const DatasetManifest& manifest) {
    json entries = json::array();
    for (const auto& e : manifest.entries) {
        json item{{"id", e.id}, {"source_path", e.source_path.generic_string()}};
        if (e.frame_index) item["frame_index"] = *e.frame_index;
        if (e.crop) {
            item["crop"] = {{"x", e.crop->x}, {"y", e.crop->y}, {"width", e.crop->width}, {"height", e.crop->height}};
        }
        if (e.landmarks) {
            json points = json::array();
            for (const auto& [x, y] : *e.landmarks) points.push_back({x, y});
            item["landmarks"] = std::move(points);
        }
        entries.push_back(std::move(item));
    }
    return json{{"entries", std::move(entries)}}.dump(2);
}

CropRect effective_crop(const ManifestEntry& entry, const Raster& image) {
    if (entry.crop) return *entry.crop;
    if (entry.landmarks && !entry.landmarks->empty()) {
        double x0 = entry.landmarks->front().first, x1 = x0;
        double y0 = entry.landmarks->front().second, y1 = y0;
        for (const auto& [x, y] : *entry.landmarks) {
            x0 = std::min(x0, x);
            x1 = std::max(x1, x);
            y0 = std::min(y0, y);
            y1 = std::max(y1, y);
        }
        const auto clip = [](double v, std::size_t hi) {
            return static_cast<std::size_t>(std::clamp(v, 0.0, static_cast<double>(hi)));
        };
        const std::size_t left = clip(std::floor(x0), image.width);
        const std::size_t top = clip(std::floor(y0), image.height);
        const std::size_t right = clip(std::ceil(x1) + 1.0, image.width);
        const std::size_t bottom = clip(std::ceil(y1) + 1.0, image.height);
        if (right <= left || bottom <= top) {
            throw Error(ErrorCode::CropOutOfBounds, "landmarks of '" + entry.id + "' lie outside the image");
        }
        return {left, top, right - left, bottom - top};
    }
    return {0, 0, image.width, image.height};
}

std::map<std::string, std::size_t> IngestSummary::failures_by_class() const {
    std::map<std::string, std::size_t> out;
    for (const auto& f : failures) ++out[std::string(to_string(f.code))];
    return out;
}

IngestSummary run_ingest(const DatasetManifest& manifest, const IngestOptions& options) {
    if (options.size == 0) throw Error(ErrorCode::InvalidInput, "output size must be at least 1");
    if (options.image_dir) {
        std::error_code ec;
        std::filesystem::create_directories(*options.image_dir, ec);
        if (ec) throw Error(ErrorCode::IoError, "cannot create '" + options.image_dir->string() + "'");
    }
    std::optional<RecordWriter> records;
    if (options.records_path) records.emplace(*options.records_path);

    IngestSummary summary;
    summary.total = manifest.entries.size();
    for (const auto& entry : manifest.entries) {
        std::vector<std::uint8_t> png;
        try {
            const Raster source = load_image(entry.source_path);
            const Raster out = crop_and_resize(source, effective_crop(entry, source), options.size, options.resample);
            png = encode_png(out);
        } catch (const Error& e) {
            spdlog::info("entry '{}' failed: {}", entry.id, e.what());
            summary.failures.push_back({entry.id, e.code(), e.what()});
            continue;
        }
        if (options.image_dir) write_file(*options.image_dir / (entry.id + ".png"), png);
        if (records) records->append(png);
        summary.produced_ids.push_back(entry.id);
        ++summary.produced;
        spdlog::debug("entry '{}' produced {} bytes", entry.id, png.size());
    }
    if (records) records->close();
    return summary;
}

}  // namespace faceset::ingest
