// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <cstring>

namespace faceset::detail {

template <typename T>
std::array<std::uint8_t, sizeof(T)> to_le(T value) {
    std::array<std::uint8_t, sizeof(T)> out{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        out[i] = static_cast<std::uint8_t>(static_cast<std::uint64_t>(value) >> (8 * i));
    }
    return out;
}

template <typename T>
T from_le(const std::uint8_t* bytes) {
    std::uint64_t value = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        value |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
    }
    return static_cast<T>(value);
}

inline std::array<std::uint8_t, 4> float_to_le(float f) {
    std::uint32_t bits;
    std::memcpy(&bits, &f, sizeof(bits));
    return to_le(bits);
}

inline float float_from_le(const std::uint8_t* bytes) {
    const auto bits = from_le<std::uint32_t>(bytes);
    float f;
    std::memcpy(&f, &bits, sizeof(f));
    return f;
}

}  // namespace faceset::detail
