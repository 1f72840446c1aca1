#pragma once

#include "lwave/ops.hpp"

#include <random>

namespace lwave {

using Rng = std::mt19937_64;

/// Conv with weight (out, in, k, k) drawn from N(0, 2 / (in*k*k)); zero bias.
ConvParams init_conv(std::size_t out_channels, std::size_t in_channels, std::size_t kernel,
                     int stride, int padding, Rng& rng);

/// Transposed conv with weight (in, out, k, k), same scheme with fan-in
/// in*k*k; zero bias of length out.
ConvParams init_conv_transpose(std::size_t in_channels, std::size_t out_channels,
                               std::size_t kernel, int stride, int padding, Rng& rng);

} // namespace lwave
