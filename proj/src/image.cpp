// SPDX-License-Identifier: Apache-2.0
#include "faceset/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "faceset/error.hpp"

namespace faceset::ingest {

Resample parse_resample(std::string_view name) {
    if (name == "nearest") return Resample::Nearest;
    if (name == "bilinear") return Resample::Bilinear;
    throw Error(ErrorCode::InvalidInput, "unknown resample mode '" + std::string(name) + "'");
}

std::string_view to_string(Resample mode) {
    return mode == Resample::Nearest ? "nearest" : "bilinear";
}

std::size_t nearest_source_index(std::size_t i, std::size_t src, std::size_t dst) {
    // Exact integer form of floor((i + 0.5) * src / dst).
    const std::size_t idx = ((2 * i + 1) * src) / (2 * dst);
    return std::min(idx, src - 1);
}

Raster crop(const Raster& image, const CropRect& rect) {
    if (rect.width == 0 || rect.height == 0) {
        throw Error(ErrorCode::InvalidInput, "crop rectangle must have positive width and height");
    }
    if (rect.x > image.width || rect.width > image.width - rect.x || rect.y > image.height ||
        rect.height > image.height - rect.y) {
        throw Error(ErrorCode::CropOutOfBounds,
                    "rect (" + std::to_string(rect.x) + "," + std::to_string(rect.y) + "," +
                        std::to_string(rect.width) + "x" + std::to_string(rect.height) +
                        ") exceeds image " + std::to_string(image.width) + "x" +
                        std::to_string(image.height));
    }
    Raster out(rect.width, rect.height, image.channels);
    const std::size_t row_bytes = rect.width * image.channels;
    for (std::size_t y = 0; y < rect.height; ++y) {
        const auto* src = &image.pixels[((rect.y + y) * image.width + rect.x) * image.channels];
        std::copy(src, src + row_bytes, &out.pixels[y * row_bytes]);
    }
    return out;
}

namespace {

Raster resize_nearest(const Raster& image, std::size_t tw, std::size_t th) {
    Raster out(tw, th, image.channels);
    std::vector<std::size_t> xs(tw);
    for (std::size_t x = 0; x < tw; ++x) xs[x] = nearest_source_index(x, image.width, tw);
    for (std::size_t y = 0; y < th; ++y) {
        const std::size_t sy = nearest_source_index(y, image.height, th);
        for (std::size_t x = 0; x < tw; ++x) {
            for (std::size_t c = 0; c < image.channels; ++c) out.at(x, y, c) = image.at(xs[x], sy, c);
        }
    }
    return out;
}

struct Tap {
    std::size_t lo;
    std::size_t hi;
    double weight;  // of hi
};

Tap bilinear_tap(std::size_t i, std::size_t src, std::size_t dst) {
    double pos = (static_cast<double>(i) + 0.5) * static_cast<double>(src) / static_cast<double>(dst) - 0.5;
    pos = std::clamp(pos, 0.0, static_cast<double>(src - 1));
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, src - 1);
    return {lo, hi, pos - static_cast<double>(lo)};
}

Raster resize_bilinear(const Raster& image, std::size_t tw, std::size_t th) {
    Raster out(tw, th, image.channels);
    std::vector<Tap> xs(tw);
    for (std::size_t x = 0; x < tw; ++x) xs[x] = bilinear_tap(x, image.width, tw);
    for (std::size_t y = 0; y < th; ++y) {
        const Tap ty = bilinear_tap(y, image.height, th);
        for (std::size_t x = 0; x < tw; ++x) {
            const Tap& tx = xs[x];
            for (std::size_t c = 0; c < image.channels; ++c) {
                const double top = (1.0 - tx.weight) * image.at(tx.lo, ty.lo, c) + tx.weight * image.at(tx.hi, ty.lo, c);
                const double bottom = (1.0 - tx.weight) * image.at(tx.lo, ty.hi, c) + tx.weight * image.at(tx.hi, ty.hi, c);
                const double v = (1.0 - ty.weight) * top + ty.weight * bottom;
                out.at(x, y, c) = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
            }
        }
    }
    return out;
}

}  // namespace

Raster resize(const Raster& image, std::size_t target_width, std::size_t target_height, Resample mode) {
    if (target_width == 0 || target_height == 0) {
        throw Error(ErrorCode::InvalidInput, "target size must be at least 1");
    }
    if (image.width == 0 || image.height == 0) {
        throw Error(ErrorCode::InvalidInput, "cannot resize an empty raster");
    }
    return mode == Resample::Nearest ? resize_nearest(image, target_width, target_height)
                                     : resize_bilinear(image, target_width, target_height);
}

Raster crop_and_resize(const Raster& image, const CropRect& rect, std::size_t target, Resample mode) {
    if (target == 0) throw Error(ErrorCode::InvalidInput, "target size must be at least 1");
    return resize(crop(image, rect), target, target, mode);
}

Raster decode_image(std::span<const std::uint8_t> bytes) {
    if (bytes.empty()) throw Error(ErrorCode::DecodeError, "empty image buffer");
    const cv::Mat buffer(1, static_cast<int>(bytes.size()), CV_8UC1, const_cast<std::uint8_t*>(bytes.data()));
    cv::Mat decoded;
    try {
        decoded = cv::imdecode(buffer, cv::IMREAD_ANYCOLOR);
    } catch (const cv::Exception& e) {
        throw Error(ErrorCode::DecodeError, e.what());
    }
    if (decoded.empty()) throw Error(ErrorCode::DecodeError, "unrecognized or corrupt image data");
    if (!decoded.isContinuous()) decoded = decoded.clone();

    Raster out(static_cast<std::size_t>(decoded.cols), static_cast<std::size_t>(decoded.rows),
               static_cast<std::size_t>(decoded.channels()));
    std::copy(decoded.data, decoded.data + out.pixels.size(), out.pixels.begin());
    return out;
}

Raster load_image(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open image '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode_image(bytes);
}

std::vector<std::uint8_t> encode_png(const Raster& image) {
    if (image.channels != 1 && image.channels != 3 && image.channels != 4) {
        throw Error(ErrorCode::InvalidInput, "PNG output supports 1, 3 or 4 channels");
    }
    const cv::Mat mat(static_cast<int>(image.height), static_cast<int>(image.width),
                      CV_8UC(static_cast<int>(image.channels)), const_cast<std::uint8_t*>(image.pixels.data()));
    std::vector<std::uint8_t> out;
    if (!cv::imencode(".png", mat, out)) throw Error(ErrorCode::IoError, "PNG encoding failed");
    return out;
}

}  // namespace faceset::ingest
