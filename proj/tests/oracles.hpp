#pragma once

// Independent reference implementations. These deliberately avoid the
// library's kernels: plain loops, explicit mod-N indexing, no im2col.

#include "lwave/matrix.hpp"
#include "lwave/ops.hpp"
#include "lwave/tensor.hpp"
#include "lwave/waveblock.hpp"
#include "lwave/wavelet.hpp"

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using lwave::Matrix;
using lwave::Shape4;
using lwave::Tensor4;

// Frozen from an mpmath evaluation of the textbook db2 construction
// h = (1+r3, 3+r3, 3-r3, 1-r3) / (4 sqrt 2), g[k] = (-1)^k h[3-k], applied to
// the ramp 0..7 with periodic indexing.
inline constexpr double kDb2RampApprox[4] = {6.5534297216604337193, 0.8965754721680535241,
                                             4.7602787773243266711, 7.5887059020705167687};
inline constexpr double kDb2RampDetail[4] = {1.0352761804100830494, -3.863703305156273147, 0.0,
                                             0.0};

// 10 log10(255^2 / 16^2)
inline constexpr double kPsnrOffset16 = 24.0484039555606;

inline std::vector<double> textbook_db2_low() {
    const double r3 = std::sqrt(3.0);
    const double d = 4.0 * std::sqrt(2.0);
    return {(1 + r3) / d, (3 + r3) / d, (3 - r3) / d, (1 - r3) / d};
}

inline std::vector<double> qmf_high(const std::vector<double>& h) {
    std::vector<double> g(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        g[k] = (k % 2 == 0 ? 1.0 : -1.0) * h[h.size() - 1 - k];
    }
    return g;
}

inline std::size_t wrap(long i, std::size_t n) {
    const long m = static_cast<long>(n);
    return static_cast<std::size_t>(((i % m) + m) % m);
}

// out[n] = sum_k f[k] x[(2n - k) mod N]
inline std::vector<double> analyze(const std::vector<double>& x, std::span<const double> f) {
    std::vector<double> out(x.size() / 2, 0.0);
    for (std::size_t n = 0; n < out.size(); ++n) {
        for (std::size_t k = 0; k < f.size(); ++k) {
            out[n] += f[k] * x[wrap(2 * static_cast<long>(n) - static_cast<long>(k), x.size())];
        }
    }
    return out;
}

// Brute-force 2D band: filter `fr` runs along each row (horizontal), `fc`
// along each column, written as one double sum rather than two passes.
inline Matrix band2d(const Matrix& x, std::span<const double> fr, std::span<const double> fc) {
    Matrix out(x.rows() / 2, x.cols() / 2);
    for (std::size_t m = 0; m < out.rows(); ++m) {
        for (std::size_t n = 0; n < out.cols(); ++n) {
            double s = 0.0;
            for (std::size_t k = 0; k < fc.size(); ++k) {
                for (std::size_t l = 0; l < fr.size(); ++l) {
                    s += fc[k] * fr[l] *
                         x(wrap(2 * static_cast<long>(m) - static_cast<long>(k), x.rows()),
                           wrap(2 * static_cast<long>(n) - static_cast<long>(l), x.cols()));
                }
            }
            out(m, n) = s;
        }
    }
    return out;
}

inline lwave::wavelet::SubbandSet dwt2d(const Matrix& x, const lwave::wavelet::FilterPair& f) {
    return {band2d(x, f.low(), f.low()), band2d(x, f.low(), f.high()),
            band2d(x, f.high(), f.low()), band2d(x, f.high(), f.high())};
}

// weight (out, in, kh, kw), bias (1, out, 1, 1)
inline Tensor4 conv2d(const Tensor4& x, const Tensor4& w, const Tensor4& b, int stride, int pad) {
    const Shape4 xs = x.shape(), ws = w.shape();
    const long oh = (static_cast<long>(xs.h) + 2 * pad - static_cast<long>(ws.h)) / stride + 1;
    const long ow = (static_cast<long>(xs.w) + 2 * pad - static_cast<long>(ws.w)) / stride + 1;
    Tensor4 out({xs.n, ws.n, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow)});
    for (std::size_t n = 0; n < xs.n; ++n)
        for (std::size_t o = 0; o < ws.n; ++o)
            for (long i = 0; i < oh; ++i)
                for (long j = 0; j < ow; ++j) {
                    double s = b.data()[o];
                    for (std::size_t c = 0; c < xs.c; ++c)
                        for (std::size_t ki = 0; ki < ws.h; ++ki)
                            for (std::size_t kj = 0; kj < ws.w; ++kj) {
                                const long r = i * stride - pad + static_cast<long>(ki);
                                const long q = j * stride - pad + static_cast<long>(kj);
                                if (r < 0 || q < 0 || r >= static_cast<long>(xs.h) ||
                                    q >= static_cast<long>(xs.w))
                                    continue;
                                s += x.at(n, c, static_cast<std::size_t>(r),
                                          static_cast<std::size_t>(q)) *
                                     w.at(o, c, ki, kj);
                            }
                    out.at(n, o, static_cast<std::size_t>(i), static_cast<std::size_t>(j)) = s;
                }
    return out;
}

// Scatter form. weight (in, out, kh, kw), bias (1, out, 1, 1)
inline Tensor4 conv_transpose2d(const Tensor4& x, const Tensor4& w, const Tensor4& b, int stride,
                                int pad) {
    const Shape4 xs = x.shape(), ws = w.shape();
    const long oh = (static_cast<long>(xs.h) - 1) * stride - 2 * pad + static_cast<long>(ws.h);
    const long ow = (static_cast<long>(xs.w) - 1) * stride - 2 * pad + static_cast<long>(ws.w);
    Tensor4 out({xs.n, ws.c, static_cast<std::size_t>(oh), static_cast<std::size_t>(ow)});
    for (std::size_t n = 0; n < xs.n; ++n)
        for (std::size_t o = 0; o < ws.c; ++o)
            for (std::size_t i = 0; i < out.shape().h; ++i)
                for (std::size_t j = 0; j < out.shape().w; ++j) out.at(n, o, i, j) = b.data()[o];
    for (std::size_t n = 0; n < xs.n; ++n)
        for (std::size_t c = 0; c < xs.c; ++c)
            for (std::size_t i = 0; i < xs.h; ++i)
                for (std::size_t j = 0; j < xs.w; ++j)
                    for (std::size_t o = 0; o < ws.c; ++o)
                        for (std::size_t ki = 0; ki < ws.h; ++ki)
                            for (std::size_t kj = 0; kj < ws.w; ++kj) {
                                const long r = static_cast<long>(i) * stride - pad + static_cast<long>(ki);
                                const long q = static_cast<long>(j) * stride - pad + static_cast<long>(kj);
                                if (r < 0 || q < 0 || r >= oh || q >= ow) continue;
                                out.at(n, o, static_cast<std::size_t>(r), static_cast<std::size_t>(q)) +=
                                    x.at(n, c, i, j) * w.at(c, o, ki, kj);
                            }
    return out;
}

inline Tensor4 leaky(Tensor4 x, double slope) {
    for (double& v : x.data()) v = v >= 0.0 ? v : slope * v;
    return x;
}

// SSIM of two images that are exactly one window in size.
inline double ssim_single_window(const Matrix& a, const Matrix& b, double max_val) {
    const double n = static_cast<double>(a.size());
    double ma = 0, mb = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a.data()[i];
        mb += b.data()[i];
    }
    ma /= n;
    mb /= n;
    double va = 0, vb = 0, cov = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        va += (a.data()[i] - ma) * (a.data()[i] - ma);
        vb += (b.data()[i] - mb) * (b.data()[i] - mb);
        cov += (a.data()[i] - ma) * (b.data()[i] - mb);
    }
    va /= n;
    vb /= n;
    cov /= n;
    const double c1 = (0.01 * max_val) * (0.01 * max_val);
    const double c2 = (0.03 * max_val) * (0.03 * max_val);
    return ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Matrix m(r, c);
    for (double& v : m.data()) v = d(rng);
    return m;
}

inline Tensor4 random_tensor(Shape4 s, std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> d(lo, hi);
    Tensor4 t(s);
    for (double& v : t.data()) v = d(rng);
    return t;
}

inline double max_abs_diff(const Tensor4& a, const Tensor4& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

// L-WaveBlock: channel-wise DWT of x, then the five paths with the oracle conv kernels.
inline Tensor4 lwaveblock_forward(const lwave::LWaveBlockParams& p, const Tensor4& x) {
    const Shape4 s = x.shape();
    const auto f = lwave::wavelet::filters_for(p.config.wavelet);
    Tensor4 bands[4] = {Tensor4({s.n, s.c, s.h / 2, s.w / 2}), Tensor4({s.n, s.c, s.h / 2, s.w / 2}),
                        Tensor4({s.n, s.c, s.h / 2, s.w / 2}), Tensor4({s.n, s.c, s.h / 2, s.w / 2})};
    for (std::size_t n = 0; n < s.n; ++n) {
        for (std::size_t c = 0; c < s.c; ++c) {
            const auto pl = x.plane(n, c);
            const auto sub = oracle::dwt2d(Matrix(s.h, s.w, {pl.begin(), pl.end()}), f);
            const Matrix* m[4] = {&sub.ll, &sub.lh, &sub.hl, &sub.hh};
            for (int b = 0; b < 4; ++b) {
                std::copy(m[b]->data().begin(), m[b]->data().end(), bands[b].plane(n, c).begin());
            }
        }
    }
    const double a = p.config.slope;
    auto conv = [&](const Tensor4& v, const lwave::ConvParams& c) {
        return leaky(oracle::conv2d(v, c.weight, c.bias, c.stride, c.padding), a);
    };
    auto up = [&](const Tensor4& v, const lwave::ConvParams& c) {
        return leaky(oracle::conv_transpose2d(v, c.weight, c.bias, c.stride, c.padding), a);
    };
    const Tensor4 paths[5] = {up(conv(conv(bands[0], p.ll_conv1), p.ll_conv2), p.ll_up),
                              up(conv(bands[1], p.lh_conv), p.lh_up),
                              up(conv(bands[2], p.hl_conv), p.hl_up),
                              up(conv(bands[3], p.hh_conv), p.hh_up), conv(x, p.bypass_conv)};
    return lwave::concat_channels(paths);
}

} // namespace oracle
