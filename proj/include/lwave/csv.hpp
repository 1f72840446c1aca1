#pragma once

#include "lwave/history.hpp"

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lwave::csv {

/// "%.9g" formatting, with "inf"/"-inf"/"nan" spelled out.
std::string format_double(double v);

/// Header "epoch,<label1>,<label2>,..." then one LF-terminated row per epoch
/// holding each history's generator loss. Shorter histories leave blanks.
std::string write_loss_csv(std::span<const LossHistory> histories,
                           std::span<const std::string> labels);

/// Every field of one history:
/// epoch,generator_loss,discriminator_loss,val_psnr_db,val_ssim
std::string write_history_csv(const LossHistory& history);

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Table parse(std::string_view text);

} // namespace lwave::csv
