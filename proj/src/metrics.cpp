#include "lwave/metrics.hpp"

#include "lwave/error.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace lwave::metrics {

double psnr(std::span<const double> a, std::span<const double> b, double max_val) {
    if (a.size() != b.size() || a.empty()) throw ShapeError("psnr: inputs differ in size");
    if (!(max_val > 0.0)) throw InvalidConfig("psnr: max_val must be positive");
    double se = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        se += d * d;
    }
    if (se == 0.0) return std::numeric_limits<double>::infinity();
    const double mse = se / static_cast<double>(a.size());
    return 10.0 * std::log10(max_val * max_val / mse);
}

double psnr(const Matrix& a, const Matrix& b, double max_val) {
    if (!a.same_shape(b)) throw ShapeError("psnr: shape mismatch");
    return psnr(a.data(), b.data(), max_val);
}

double ssim(const Matrix& a, const Matrix& b, double max_val) {
    if (!a.same_shape(b)) throw ShapeError("ssim: shape mismatch");
    if (!(max_val > 0.0)) throw InvalidConfig("ssim: max_val must be positive");
    constexpr std::size_t win = kSsimWindow;
    if (a.rows() < win || a.cols() < win) {
        throw TooSmall("ssim: image smaller than the 8x8 window");
    }
    const double c1 = (0.01 * max_val) * (0.01 * max_val);
    const double c2 = (0.03 * max_val) * (0.03 * max_val);
    constexpr double count = static_cast<double>(win * win);

    double total = 0.0;
    std::size_t windows = 0;
    for (std::size_t r0 = 0; r0 + win <= a.rows(); ++r0) {
        for (std::size_t c0 = 0; c0 + win <= a.cols(); ++c0) {
            double sa = 0.0, sb = 0.0;
            for (std::size_t r = r0; r < r0 + win; ++r) {
                for (std::size_t c = c0; c < c0 + win; ++c) {
                    sa += a(r, c);
                    sb += b(r, c);
                }
            }
            const double ma = sa / count;
            const double mb = sb / count;
            double vaa = 0.0, vbb = 0.0, vab = 0.0;
            for (std::size_t r = r0; r < r0 + win; ++r) {
                for (std::size_t c = c0; c < c0 + win; ++c) {
                    const double da = a(r, c) - ma;
                    const double db = b(r, c) - mb;
                    vaa += da * da;
                    vbb += db * db;
                    vab += da * db;
                }
            }
            vaa /= count;
            vbb /= count;
            vab /= count;
            const double num = (2.0 * ma * mb + c1) * (2.0 * vab + c2);
            const double den = (ma * ma + mb * mb + c1) * (vaa + vbb + c2);
            total += num / den;
            ++windows;
        }
    }
    return total / static_cast<double>(windows);
}

bool MetricReport::psnr_infinite() const noexcept { return std::isinf(psnr_db); }

MetricReport evaluate(const Matrix& a, const Matrix& b, double max_val) {
    return {psnr(a, b, max_val), ssim(a, b, max_val)};
}

std::string format_psnr(double psnr_db, int decimals) {
    if (std::isinf(psnr_db)) return "inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, psnr_db);
    return buf;
}

} // namespace lwave::metrics
