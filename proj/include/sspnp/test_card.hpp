#pragma once

#include <cstdint>

#include "sspnp/image.hpp"

namespace sspnp::harness {

// Deterministic synthetic photograph stand-in: smooth gradients, soft color
// blobs, hard-edged shapes and mild texture. Used as the bundled test input
// so the pipeline needs no external downloads.
Image make_test_card(int height, int width, int channels = 3, uint64_t seed = 0);

}  // namespace sspnp::harness
