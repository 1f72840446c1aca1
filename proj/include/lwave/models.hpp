#pragma once

// Small UNet generator with optional L-WaveBlock skip connections, and a
// three-layer patch discriminator.
//
// Generator layout for depth D, widths c_0 = base, c_l = base * 2^(l-1):
//
//   stem:       conv3x3  in  -> c_0            (H)        skip 0
//   encoder l:  conv4x4/2 c_{l-1} -> c_l       (H / 2^l)  skip l for l < D
//   bottleneck: conv3x3  c_D -> c_D
//   decoder l = D..1:
//       convT2x2/2 -> c_{l-1}, concat skip l-1 (or its L-WaveBlock), conv3x3 -> c_{l-1}
//   head:       conv3x3  c_0 -> out, sigmoid
//
// Every conv except the head is followed by LeakyReLU. With use_waveblock the
// block output replaces the plain skip tensor.

#include "lwave/autograd.hpp"
#include "lwave/waveblock.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace lwave {

struct GeneratorConfig {
    int depth = 3;
    int base_channels = 16;
    int in_channels = 1;
    int out_channels = 1;
    bool use_waveblock = false;
    /// Path width per skip level (index 0 = full resolution). A single entry
    /// applies to every level.
    std::vector<int> waveblock_channels{8};
    wavelet::Family wavelet = wavelet::Family::db2;
    double slope = 0.2;
    std::uint64_t seed = 0;

    void validate() const; // throws InvalidConfig
    int channels_at(int level) const;
    int waveblock_channels_at(int level) const;
};

class Generator {
public:
    explicit Generator(GeneratorConfig config);

    ag::Var forward(ag::Tape& tape, ag::Var x, bool trainable = true) const;
    Tensor4 forward(const Tensor4& x) const;

    const GeneratorConfig& config() const noexcept { return config_; }
    std::vector<Tensor4*> parameters();
    std::vector<const Tensor4*> parameters() const;
    std::size_t parameter_count() const;
    const std::vector<LWaveBlockParams>& blocks() const noexcept { return blocks_; }

    /// "LWG1" checkpoint: model header, plain-layer values, then one embedded
    /// "LWB1" record per skip block. See docs/formats.md.
    std::vector<std::uint8_t> serialize() const;
    static Generator deserialize(std::span<const std::uint8_t> bytes);

private:
    void check_input(const Shape4& s) const;

    GeneratorConfig config_;
    ConvParams stem_;
    std::vector<ConvParams> encoder_; // level 1..D stored at 0..D-1
    ConvParams bottleneck_;
    std::vector<ConvParams> up_;      // decoder level l stored at l-1
    std::vector<ConvParams> fuse_;
    ConvParams head_;
    std::vector<LWaveBlockParams> blocks_; // skip level 0..D-1 when enabled
};

/// conv4x4/2 (in -> 16) -> act -> conv4x4/2 (16 -> 32) -> act ->
/// conv4x4/2 (32 -> 1); emits an (H/8, W/8) logit map.
class Discriminator {
public:
    explicit Discriminator(std::uint64_t seed, int in_channels = 1, double slope = 0.2);

    ag::Var forward(ag::Tape& tape, ag::Var x, bool trainable = true) const;
    Tensor4 forward(const Tensor4& x) const;

    std::vector<Tensor4*> parameters();
    std::vector<const Tensor4*> parameters() const;

private:
    std::vector<ConvParams> layers_;
    double slope_;
};

Generator build_generator(const GeneratorConfig& config);
Discriminator build_discriminator(std::uint64_t seed);

} // namespace lwave
