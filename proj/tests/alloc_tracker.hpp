// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>

// Counts bytes obtained through the global operator new in this binary.
namespace alloc_tracker {

std::size_t current();
std::size_t peak();
// Sets the peak to the current level.
void reset_peak();

}  // namespace alloc_tracker
