#pragma once

#include <optional>
#include <string>
#include <vector>

namespace lwave {

struct EpochRecord {
    int epoch = 0;
    double generator_loss = 0.0;
    std::optional<double> discriminator_loss; // adversarial mode only
    double val_psnr_db = 0.0;                 // +infinity when reconstruction is exact
    double val_ssim = 0.0;
};

struct LossHistory {
    std::vector<EpochRecord> records;
    double threshold = 0.0;                 // tau used for epochs_to_threshold
    std::optional<int> epochs_to_threshold; // first epoch with loss <= tau
    std::string loss_label;                 // what generator_loss measures

    /// Recomputes epochs_to_threshold for the stored threshold.
    void update_threshold_epoch();
};

} // namespace lwave
