#pragma once

#include "lwave/dataset.hpp"
#include "lwave/history.hpp"
#include "lwave/metrics.hpp"
#include "lwave/models.hpp"
#include "lwave/optim.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace lwave {

enum class LossMode { l1_only, adversarial_plus_l1 };

LossMode parse_loss_mode(std::string_view name);
std::string_view to_string(LossMode mode) noexcept;

struct TrainConfig {
    int epochs = 200;
    int batch_size = 4;
    AdamConfig adam{};
    LossMode mode = LossMode::l1_only;
    double lambda_adv = 0.0;
    double lambda_l1 = 1.0;
    /// Loss threshold for epochs-to-threshold; <= 0 selects 50% of the
    /// epoch-0 loss.
    double threshold = 0.0;
    std::uint64_t seed = 0; // data order and discriminator init

    /// Adversarial mode with lambda_l1 = 100 and lambda_adv = 1.
    static TrainConfig adversarial();
    void validate() const; // throws InvalidConfig
};

struct Dataset {
    std::vector<data::ImagePair> train;
    std::vector<data::ImagePair> validation;
};

struct TrainResult {
    LossHistory history;
    Generator generator;
};

/// Trains a freshly built generator. Epoch loss is the mean over that
/// epoch's batches of the generator objective evaluated before each update;
/// validation PSNR/SSIM (max_val 1.0) are averaged over the held-out split
/// after each epoch. Throws NonFiniteLoss on a NaN/Inf loss.
TrainResult train_model(const GeneratorConfig& gen_config, const TrainConfig& train_config,
                        const Dataset& dataset);
LossHistory train(const GeneratorConfig& gen_config, const TrainConfig& train_config,
                  const Dataset& dataset);

struct VariantResult {
    std::string label;
    TrainResult result;
    std::size_t parameter_count = 0;
    metrics::MetricReport final_metrics; // mean over the held-out split
};

struct ComparisonReport {
    double threshold = 0.0;
    VariantResult baseline;
    VariantResult waveblock;

    /// Plain-text report: reference context, threshold, and per-variant
    /// key=value lines.
    std::string to_text() const;
};

/// Trains the generator without and with L-WaveBlock skips from the same seed
/// and data order. One threshold is shared by both variants: the configured
/// one, or 50% of the baseline's epoch-0 loss.
ComparisonReport compare_convergence(const GeneratorConfig& gen_config_base,
                                     const TrainConfig& train_config, const Dataset& dataset);

} // namespace lwave
