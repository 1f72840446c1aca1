#include "lwave/csv.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace lwave {

void LossHistory::update_threshold_epoch() {
    epochs_to_threshold.reset();
    for (const auto& r : records) {
        if (r.generator_loss <= threshold) {
            epochs_to_threshold = r.epoch;
            return;
        }
    }
}

namespace csv {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string write_loss_csv(std::span<const LossHistory> histories,
                           std::span<const std::string> labels) {
    if (histories.size() != labels.size()) {
        throw InvalidConfig("write_loss_csv: one label per history required");
    }
    std::string out = "epoch";
    for (const auto& l : labels) out += "," + l;
    out += "\n";
    std::size_t rows = 0;
    for (const auto& h : histories) rows = std::max(rows, h.records.size());
    for (std::size_t i = 0; i < rows; ++i) {
        int epoch = static_cast<int>(i);
        for (const auto& h : histories) {
            if (i < h.records.size()) {
                epoch = h.records[i].epoch;
                break;
            }
        }
        out += std::to_string(epoch);
        for (const auto& h : histories) {
            out += ",";
            if (i < h.records.size()) out += format_double(h.records[i].generator_loss);
        }
        out += "\n";
    }
    return out;
}

std::string write_history_csv(const LossHistory& history) {
    std::string out = "epoch,generator_loss,discriminator_loss,val_psnr_db,val_ssim\n";
    for (const auto& r : history.records) {
        out += std::to_string(r.epoch) + "," + format_double(r.generator_loss) + ",";
        if (r.discriminator_loss) out += format_double(*r.discriminator_loss);
        out += "," + format_double(r.val_psnr_db) + "," + format_double(r.val_ssim) + "\n";
    }
    return out;
}

Table parse(std::string_view text) {
    Table t;
    bool first = true;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const auto comma = line.find(',', start);
            fields.emplace_back(line.substr(start, comma - start));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (first) {
            t.header = std::move(fields);
            first = false;
        } else {
            t.rows.push_back(std::move(fields));
        }
    }
    return t;
}

} // namespace csv
} // namespace lwave
