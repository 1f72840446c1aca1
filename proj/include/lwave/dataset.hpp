#pragma once

#include "lwave/matrix.hpp"

#include <cstdint>
#include <string_view>
#include <vector>

namespace lwave::data {

enum class CorruptionKind { gaussian_noise, box_blur };

CorruptionKind parse_corruption(std::string_view name);
std::string_view to_string(CorruptionKind kind) noexcept;

struct Corruption {
    CorruptionKind kind = CorruptionKind::gaussian_noise;
    double sigma = 0.1; // gaussian_noise: noise std-dev on the [0, 1] scale
    int kernel = 3;     // box_blur: odd window side
};

struct ImagePair {
    Matrix corrupted;
    Matrix clean;
};

/// Procedural single-channel images (gradient backgrounds, rectangles and
/// checkerboard patches) in [0, 1] plus a corrupted copy. Noisy samples are
/// clamped back into [0, 1]; the blur clamps at image edges.
std::vector<ImagePair> synth_dataset(std::uint64_t seed, std::size_t count, std::size_t size,
                                     const Corruption& corruption);

} // namespace lwave::data
