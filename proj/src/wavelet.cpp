#include "lwave/wavelet.hpp"

#include "lwave/error.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

namespace lwave::wavelet {
namespace {

constexpr double kFilterTol = 1e-12;

// Strided periodic analysis: reads n samples at x[i*stride], writes n/2
// approximation and detail samples at a[i*ostride], d[i*ostride].
void analyze(const double* x, std::size_t n, std::size_t stride,
             double* a, double* d, std::size_t ostride, const FilterPair& f) {
    const auto h = f.low();
    const auto g = f.high();
    const std::size_t L = h.size();
    const std::size_t half = n / 2;
    for (std::size_t i = 0; i < half; ++i) {
        double sa = 0.0;
        double sd = 0.0;
        for (std::size_t k = 0; k < L; ++k) {
            // (2i - k) mod n, with n >= L so one wrap suffices
            const std::size_t idx = (2 * i + n - (k % n)) % n;
            const double v = x[idx * stride];
            sa += h[k] * v;
            sd += g[k] * v;
        }
        a[i * ostride] = sa;
        d[i * ostride] = sd;
    }
}

// Transpose of analyze(); overwrites the n outputs at x[i*stride].
void synthesize(const double* a, const double* d, std::size_t half, std::size_t istride,
                double* x, std::size_t stride, const FilterPair& f) {
    const auto h = f.low();
    const auto g = f.high();
    const std::size_t L = h.size();
    const std::size_t n = 2 * half;
    for (std::size_t i = 0; i < n; ++i) x[i * stride] = 0.0;
    for (std::size_t i = 0; i < half; ++i) {
        const double av = a[i * istride];
        const double dv = d[i * istride];
        for (std::size_t k = 0; k < L; ++k) {
            const std::size_t idx = (2 * i + n - (k % n)) % n;
            x[idx * stride] += h[k] * av + g[k] * dv;
        }
    }
}

void require_transformable(std::size_t n, const FilterPair& f, const char* what) {
    if (n % 2 != 0 || n < f.length()) {
        throw InvalidShape(std::string(what) + ": dimension " + std::to_string(n) +
                           " must be even and >= filter length " + std::to_string(f.length()));
    }
}

} // namespace

std::string_view to_string(Family f) noexcept {
    return f == Family::haar ? "haar" : "db2";
}

Family parse_family(std::string_view name) {
    if (name == "haar") return Family::haar;
    if (name == "db2") return Family::db2;
    throw InvalidConfig("unknown wavelet '" + std::string(name) + "' (expected haar or db2)");
}

FilterPair::FilterPair(std::vector<double> low, std::vector<double> high)
    : h_(std::move(low)), g_(std::move(high)) {
    const std::size_t L = h_.size();
    if (L < 2 || L % 2 != 0 || g_.size() != L) {
        throw InvalidConfig("FilterPair: filters must have equal, even length >= 2");
    }
    const double sum_h = std::accumulate(h_.begin(), h_.end(), 0.0);
    const double sum_g = std::accumulate(g_.begin(), g_.end(), 0.0);
    const double energy = std::inner_product(h_.begin(), h_.end(), h_.begin(), 0.0);
    if (std::abs(sum_h - std::sqrt(2.0)) > kFilterTol || std::abs(sum_g) > kFilterTol ||
        std::abs(energy - 1.0) > kFilterTol) {
        throw InvalidConfig("FilterPair: filters are not an orthonormal low/high pair");
    }
    for (std::size_t k = 0; k < L; ++k) {
        const double mirrored = (k % 2 == 0 ? 1.0 : -1.0) * h_[L - 1 - k];
        if (std::abs(g_[k] - mirrored) > kFilterTol) {
            throw InvalidConfig("FilterPair: high-pass is not the quadrature mirror of low-pass");
        }
    }
}

FilterPair haar_filters() {
    const double r = 1.0 / std::sqrt(2.0);
    return FilterPair({r, r}, {r, -r});
}

FilterPair db2_filters() {
    const double s3 = std::sqrt(3.0);
    const double norm = 4.0 * std::sqrt(2.0);
    std::vector<double> h{(1.0 + s3) / norm, (3.0 + s3) / norm, (3.0 - s3) / norm,
                          (1.0 - s3) / norm};
    std::vector<double> g(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - k];
    }
    return FilterPair(std::move(h), std::move(g));
}

FilterPair filters_for(Family f) {
    return f == Family::haar ? haar_filters() : db2_filters();
}

Coeffs1D dwt1d(std::span<const double> signal, const FilterPair& filters) {
    const std::size_t n = signal.size();
    if (n % 2 != 0 || n < filters.length()) {
        throw InvalidLength("dwt1d: signal length " + std::to_string(n) +
                            " must be even and >= filter length " +
                            std::to_string(filters.length()));
    }
    Coeffs1D out{std::vector<double>(n / 2), std::vector<double>(n / 2)};
    analyze(signal.data(), n, 1, out.approx.data(), out.detail.data(), 1, filters);
    return out;
}

std::vector<double> idwt1d(std::span<const double> approx, std::span<const double> detail,
                           const FilterPair& filters) {
    if (approx.size() != detail.size()) {
        throw InvalidLength("idwt1d: approx and detail lengths differ");
    }
    if (approx.empty()) throw InvalidLength("idwt1d: empty coefficients");
    std::vector<double> x(2 * approx.size());
    synthesize(approx.data(), detail.data(), approx.size(), 1, x.data(), 1, filters);
    return x;
}

SubbandSet dwt2d(const Matrix& image, const FilterPair& filters) {
    const std::size_t H = image.rows();
    const std::size_t W = image.cols();
    require_transformable(H, filters, "dwt2d rows");
    require_transformable(W, filters, "dwt2d cols");
    const std::size_t h2 = H / 2;
    const std::size_t w2 = W / 2;

    // Pass 1: filter along each row.
    Matrix row_lo(H, w2), row_hi(H, w2);
    for (std::size_t r = 0; r < H; ++r) {
        analyze(image.row(r).data(), W, 1, row_lo.row(r).data(), row_hi.row(r).data(), 1,
                filters);
    }
    // Pass 2: filter along each column of both halves.
    SubbandSet out{Matrix(h2, w2), Matrix(h2, w2), Matrix(h2, w2), Matrix(h2, w2)};
    for (std::size_t c = 0; c < w2; ++c) {
        analyze(row_lo.data().data() + c, H, w2, out.ll.data().data() + c,
                out.lh.data().data() + c, w2, filters);
        analyze(row_hi.data().data() + c, H, w2, out.hl.data().data() + c,
                out.hh.data().data() + c, w2, filters);
    }
    return out;
}

Matrix idwt2d(const SubbandSet& bands, const FilterPair& filters) {
    const auto& ll = bands.ll;
    if (!ll.same_shape(bands.lh) || !ll.same_shape(bands.hl) || !ll.same_shape(bands.hh)) {
        throw InvalidShape("idwt2d: subband planes differ in shape");
    }
    if (ll.empty()) throw InvalidShape("idwt2d: empty subbands");
    const std::size_t h2 = ll.rows();
    const std::size_t w2 = ll.cols();
    const std::size_t H = 2 * h2;
    const std::size_t W = 2 * w2;

    Matrix row_lo(H, w2), row_hi(H, w2);
    for (std::size_t c = 0; c < w2; ++c) {
        synthesize(bands.ll.data().data() + c, bands.lh.data().data() + c, h2, w2,
                   row_lo.data().data() + c, w2, filters);
        synthesize(bands.hl.data().data() + c, bands.hh.data().data() + c, h2, w2,
                   row_hi.data().data() + c, w2, filters);
    }
    Matrix out(H, W);
    for (std::size_t r = 0; r < H; ++r) {
        synthesize(row_lo.row(r).data(), row_hi.row(r).data(), w2, 1, out.row(r).data(), 1,
                   filters);
    }
    return out;
}

MultiLevelDecomposition wavedec2(const Matrix& image, const FilterPair& filters, int depth) {
    if (depth < 1) throw InvalidConfig("wavedec2: depth must be positive");
    const std::size_t div = std::size_t{1} << depth;
    if (image.rows() % div != 0 || image.cols() % div != 0) {
        throw InvalidShape("wavedec2: dimensions must be divisible by 2^depth = " +
                           std::to_string(div));
    }
    MultiLevelDecomposition dec;
    Matrix current = image;
    for (int level = 0; level < depth; ++level) {
        SubbandSet bands = dwt2d(current, filters);
        dec.levels.push_back({std::move(bands.lh), std::move(bands.hl), std::move(bands.hh)});
        current = std::move(bands.ll);
    }
    dec.final_ll = std::move(current);
    return dec;
}

Matrix waverec2(const MultiLevelDecomposition& dec, const FilterPair& filters) {
    Matrix current = dec.final_ll;
    for (auto it = dec.levels.rbegin(); it != dec.levels.rend(); ++it) {
        current = idwt2d({std::move(current), it->lh, it->hl, it->hh}, filters);
    }
    return current;
}

} // namespace lwave::wavelet
