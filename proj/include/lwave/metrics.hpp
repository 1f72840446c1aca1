#pragma once

#include "lwave/matrix.hpp"

#include <span>
#include <string>

namespace lwave::metrics {

/// Side length of the uniform SSIM window.
inline constexpr std::size_t kSsimWindow = 8;

/// 10*log10(max_val^2 / MSE). Returns +infinity when the inputs are equal.
double psnr(std::span<const double> a, std::span<const double> b, double max_val);
double psnr(const Matrix& a, const Matrix& b, double max_val);

/// Mean SSIM over every valid 8x8 window (stride 1, no padding), with
/// C1 = (0.01 max_val)^2 and C2 = (0.03 max_val)^2 and population statistics.
double ssim(const Matrix& a, const Matrix& b, double max_val);

struct MetricReport {
    double psnr_db = 0.0; // +infinity for identical inputs
    double ssim = 0.0;

    bool psnr_infinite() const noexcept;
};

MetricReport evaluate(const Matrix& a, const Matrix& b, double max_val);

/// "inf" for an infinite PSNR, otherwise fixed with `decimals` digits.
std::string format_psnr(double psnr_db, int decimals = 4);

} // namespace lwave::metrics
