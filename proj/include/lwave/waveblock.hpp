#pragma once

// L-WaveBlock: a DWT-based skip-connection feature extractor.
//
//            +-> LL -> conv -> act -> conv -> act -> convT(2,2) -> act --+
//            |                                                           |
//   x -> DWT +-> LH -> conv -> act -> convT(2,2) -> act -----------------+
//   |        +-> HL -> conv -> act -> convT(2,2) -> act -----------------+-> concat
//   |        +-> HH -> conv -> act -> convT(2,2) -> act -----------------+
//   +-> bypass conv -> act ----------------------------------------------+
//
// The DWT is applied per input channel and has no parameters. Every path
// emits path_channels channels at the input resolution, so the output is
// (N, 5 * path_channels, H, W).

#include "lwave/autograd.hpp"
#include "lwave/init.hpp"
#include "lwave/ops.hpp"
#include "lwave/wavelet.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lwave {

struct LWaveBlockConfig {
    int in_channels = 1;
    int path_channels = 8;
    wavelet::Family wavelet = wavelet::Family::db2;
    double slope = 0.2;
};

struct LWaveBlockParams {
    LWaveBlockConfig config;
    ConvParams ll_conv1, ll_conv2;
    ConvParams lh_conv, hl_conv, hh_conv;
    ConvParams ll_up, lh_up, hl_up, hh_up;
    ConvParams bypass_conv;

    /// Fixed order used by initialization, gradients and serialization:
    /// ll_conv1, ll_conv2, lh_conv, hl_conv, hh_conv, ll_up, lh_up, hl_up,
    /// hh_up, bypass_conv; weight before bias within each.
    std::vector<Tensor4*> parameters();
    std::vector<const Tensor4*> parameters() const;
    std::size_t parameter_count() const;
};

LWaveBlockParams lwaveblock_init(const LWaveBlockConfig& config, std::uint64_t seed);
/// Draws from a caller-owned generator so larger models stay reproducible.
LWaveBlockParams lwaveblock_init(const LWaveBlockConfig& config, std::mt19937_64& rng);

ag::Var lwaveblock_forward(ag::Tape& tape, const LWaveBlockParams& params, ag::Var x,
                           bool trainable = true);
Tensor4 lwaveblock_forward(const LWaveBlockParams& params, const Tensor4& x);

/// Parameter gradients of <forward(x), upstream>, i.e. the block's
/// vector-Jacobian product for an upstream gradient `upstream`. Returned in
/// parameters() order.
std::vector<Tensor4> lwaveblock_gradients(const LWaveBlockParams& params, const Tensor4& x,
                                          const Tensor4& upstream);

/// "LWB1" binary format; see docs/formats.md.
std::vector<std::uint8_t> serialize(const LWaveBlockParams& params);
LWaveBlockParams deserialize_lwaveblock(std::span<const std::uint8_t> bytes);

} // namespace lwave
