// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

namespace faceset::ingest {

// Interleaved 8-bit raster, row-major, `channels` samples per pixel.
struct Raster {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 0;
    std::vector<std::uint8_t> pixels;

    Raster() = default;
    Raster(std::size_t w, std::size_t h, std::size_t c)
        : width(w), height(h), channels(c), pixels(w * h * c, 0) {}

    std::uint8_t& at(std::size_t x, std::size_t y, std::size_t c) {
        return pixels[(y * width + x) * channels + c];
    }
    std::uint8_t at(std::size_t x, std::size_t y, std::size_t c) const {
        return pixels[(y * width + x) * channels + c];
    }

    bool operator==(const Raster&) const = default;
};

struct CropRect {
    std::size_t x = 0;
    std::size_t y = 0;
    std::size_t width = 0;
    std::size_t height = 0;

    bool operator==(const CropRect&) const = default;
};

enum class Resample { Nearest, Bilinear };

Resample parse_resample(std::string_view name);
std::string_view to_string(Resample mode);

// Source index for destination index i: floor((i + 0.5) * src / dst).
std::size_t nearest_source_index(std::size_t i, std::size_t src, std::size_t dst);

Raster crop(const Raster& image, const CropRect& rect);
Raster resize(const Raster& image, std::size_t target_width, std::size_t target_height, Resample mode);

/// Crops `rect` out of `image` and resamples it to target x target.
/// Throws CropOutOfBounds when the rectangle leaves the image.
Raster crop_and_resize(const Raster& image, const CropRect& rect, std::size_t target,
                       Resample mode = Resample::Bilinear);

// Codec support (PNG, JPEG, ...). Decode failures throw DecodeError.
Raster decode_image(std::span<const std::uint8_t> bytes);
Raster load_image(const std::filesystem::path& path);
std::vector<std::uint8_t> encode_png(const Raster& image);

}  // namespace faceset::ingest
