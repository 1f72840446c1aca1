#pragma once

// Flat "key = value" experiment configuration. '#' starts a comment; blank
// lines are ignored; unknown or repeated keys are rejected.

#include "lwave/dataset.hpp"
#include "lwave/models.hpp"
#include "lwave/train.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lwave {

struct RunConfig {
    std::uint64_t seed = 42;      // generator init, data order, discriminator init
    std::uint64_t data_seed = 7;  // synthetic dataset
    int image_size = 32;
    int train_count = 16;
    int val_count = 4;
    data::Corruption corruption{data::CorruptionKind::gaussian_noise, 0.1, 3};

    int depth = 3;
    int base_channels = 16;
    std::vector<int> waveblock_channels{8};
    wavelet::Family wavelet = wavelet::Family::db2;
    double slope = 0.2;

    int epochs = 200;
    int batch_size = 4;
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    LossMode loss_mode = LossMode::l1_only;
    double lambda_adv = 0.0;
    double lambda_l1 = 1.0;
    double threshold = 0.0; // <= 0: half the baseline's epoch-0 loss

    /// Applies one assignment; throws InvalidConfig for unknown keys or
    /// unparsable values.
    void set(std::string_view key, std::string_view value);

    GeneratorConfig generator_config() const;
    TrainConfig train_config() const;
    Dataset make_dataset() const;
    void validate() const;

    /// Every key with its resolved value, in documentation order.
    std::string to_text() const;
};

/// Documented keys with their default values and a one-line description.
struct ConfigKey {
    std::string_view name;
    std::string_view default_value;
    std::string_view description;
};
std::span<const ConfigKey> config_keys();

RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);
/// Applies "key=value" overrides on top of `cfg`.
void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides);

} // namespace lwave
