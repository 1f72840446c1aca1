#pragma once

// Binary netpbm images: P5 (grey) and P6 (RGB), maxval 255 only.

#include "lwave/matrix.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace lwave::pnm {

struct ImageU8 {
    std::size_t width = 0;
    std::size_t height = 0;
    std::size_t channels = 1; // 1 (P5) or 3 (P6)
    std::vector<std::uint8_t> samples; // row-major, channels interleaved

    friend bool operator==(const ImageU8&, const ImageU8&) = default;
};

ImageU8 read_pnm(std::span<const std::uint8_t> bytes);
/// Canonical encoding: "P5\n<w> <h>\n255\n" (or P6) followed by samples.
std::vector<std::uint8_t> write_pnm(const ImageU8& image);

ImageU8 read_pnm_file(const std::filesystem::path& path);
void write_pnm_file(const std::filesystem::path& path, const ImageU8& image);

/// Channel c as doubles on the original 0..255 scale.
Matrix channel_plane(const ImageU8& image, std::size_t c);
/// Grey image from a plane; values are mapped linearly from [lo, hi] to
/// [0, 255], rounded and clamped. lo == hi maps everything to 0.
ImageU8 grey_from_plane(const Matrix& plane, double lo, double hi);

} // namespace lwave::pnm
