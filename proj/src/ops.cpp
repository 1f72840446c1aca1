#include "lwave/ops.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lwave {
namespace {

// Geometry of a convolution between an "image" side (C, H, W) and a "column"
// side of (OH, OW) output positions. Transposed convolution reuses it with the
// roles of input and output swapped.
struct Geometry {
    std::size_t channels, height, width;
    std::size_t kh, kw;
    std::size_t out_h, out_w;
    int stride, padding;

    std::size_t rows() const { return channels * kh * kw; }
    std::size_t cols() const { return out_h * out_w; }
};

void im2col(const double* img, const Geometry& g, double* col) {
    const auto P = g.cols();
    for (std::size_t c = 0; c < g.channels; ++c) {
        for (std::size_t i = 0; i < g.kh; ++i) {
            for (std::size_t j = 0; j < g.kw; ++j) {
                double* dst = col + ((c * g.kh + i) * g.kw + j) * P;
                for (std::size_t oy = 0; oy < g.out_h; ++oy) {
                    const long y = static_cast<long>(oy) * g.stride - g.padding + static_cast<long>(i);
                    double* drow = dst + oy * g.out_w;
                    if (y < 0 || y >= static_cast<long>(g.height)) {
                        std::fill(drow, drow + g.out_w, 0.0);
                        continue;
                    }
                    const double* srow = img + (c * g.height + static_cast<std::size_t>(y)) * g.width;
                    for (std::size_t ox = 0; ox < g.out_w; ++ox) {
                        const long x = static_cast<long>(ox) * g.stride - g.padding + static_cast<long>(j);
                        drow[ox] = (x < 0 || x >= static_cast<long>(g.width)) ? 0.0 : srow[x];
                    }
                }
            }
        }
    }
}

// Accumulates columns back into the image (adjoint of im2col).
void col2im(const double* col, const Geometry& g, double* img) {
    const auto P = g.cols();
    for (std::size_t c = 0; c < g.channels; ++c) {
        for (std::size_t i = 0; i < g.kh; ++i) {
            for (std::size_t j = 0; j < g.kw; ++j) {
                const double* src = col + ((c * g.kh + i) * g.kw + j) * P;
                for (std::size_t oy = 0; oy < g.out_h; ++oy) {
                    const long y = static_cast<long>(oy) * g.stride - g.padding + static_cast<long>(i);
                    if (y < 0 || y >= static_cast<long>(g.height)) continue;
                    double* irow = img + (c * g.height + static_cast<std::size_t>(y)) * g.width;
                    const double* srow = src + oy * g.out_w;
                    for (std::size_t ox = 0; ox < g.out_w; ++ox) {
                        const long x = static_cast<long>(ox) * g.stride - g.padding + static_cast<long>(j);
                        if (x >= 0 && x < static_cast<long>(g.width)) irow[x] += srow[ox];
                    }
                }
            }
        }
    }
}

// C(M x P) += A(M x R) * B(R x P)
void gemm_acc(const double* a, const double* b, double* c, std::size_t M, std::size_t R,
              std::size_t P) {
    for (std::size_t m = 0; m < M; ++m) {
        double* crow = c + m * P;
        for (std::size_t r = 0; r < R; ++r) {
            const double av = a[m * R + r];
            const double* brow = b + r * P;
            for (std::size_t p = 0; p < P; ++p) crow[p] += av * brow[p];
        }
    }
}

// C(R x P) += A(M x R)^T * B(M x P)
void gemm_tn_acc(const double* a, const double* b, double* c, std::size_t M, std::size_t R,
                 std::size_t P) {
    for (std::size_t m = 0; m < M; ++m) {
        const double* brow = b + m * P;
        for (std::size_t r = 0; r < R; ++r) {
            const double av = a[m * R + r];
            double* crow = c + r * P;
            for (std::size_t p = 0; p < P; ++p) crow[p] += av * brow[p];
        }
    }
}

// C(M x R) += A(M x P) * B(R x P)^T
void gemm_nt_acc(const double* a, const double* b, double* c, std::size_t M, std::size_t R,
                 std::size_t P) {
    for (std::size_t m = 0; m < M; ++m) {
        const double* arow = a + m * P;
        for (std::size_t r = 0; r < R; ++r) {
            const double* brow = b + r * P;
            double s = 0.0;
            for (std::size_t p = 0; p < P; ++p) s += arow[p] * brow[p];
            c[m * R + r] += s;
        }
    }
}

void check_conv_args(const Tensor4& weight, const Tensor4& bias, std::size_t bias_len,
                     int stride, int padding, const char* op) {
    const auto& ws = weight.shape();
    if (ws.n == 0 || ws.c == 0 || ws.h == 0 || ws.w == 0) {
        throw ShapeError(std::string(op) + ": empty weight " + ws.str());
    }
    if (stride < 1 || padding < 0) {
        throw ShapeError(std::string(op) + ": stride must be >= 1 and padding >= 0");
    }
    if (bias.numel() != bias_len) {
        throw ShapeError(std::string(op) + ": bias has " + std::to_string(bias.numel()) +
                         " entries, expected " + std::to_string(bias_len));
    }
}

Geometry conv_geometry(const Shape4& xs, const Shape4& ws, int stride, int padding) {
    return {xs.c, xs.h, xs.w, ws.h, ws.w,
            conv_out_dim(xs.h, ws.h, stride, padding), conv_out_dim(xs.w, ws.w, stride, padding),
            stride, padding};
}

Geometry transpose_geometry(const Shape4& xs, const Shape4& ws, int stride, int padding) {
    return {ws.c, conv_transpose_out_dim(xs.h, ws.h, stride, padding),
            conv_transpose_out_dim(xs.w, ws.w, stride, padding), ws.h, ws.w, xs.h, xs.w,
            stride, padding};
}

void require_same(const Tensor4& a, const Tensor4& b, const char* op) {
    if (a.shape() != b.shape()) {
        throw ShapeError(std::string(op) + ": shape mismatch " + a.shape().str() + " vs " +
                         b.shape().str());
    }
}

} // namespace

ConvParams ConvParams::zeros(std::size_t d0, std::size_t d1, std::size_t kh, std::size_t kw,
                             std::size_t bias_len, int stride, int padding) {
    return {Tensor4({d0, d1, kh, kw}), Tensor4({1, bias_len, 1, 1}), stride, padding};
}

std::size_t conv_out_dim(std::size_t in, std::size_t k, int stride, int padding) {
    const long span = static_cast<long>(in) + 2L * padding - static_cast<long>(k);
    if (stride < 1 || span < 0 || span % stride != 0) {
        throw ShapeError("conv2d: (" + std::to_string(in) + " + 2*" + std::to_string(padding) +
                         " - " + std::to_string(k) + ") is not a non-negative multiple of stride " +
                         std::to_string(stride));
    }
    return static_cast<std::size_t>(span / stride + 1);
}

std::size_t conv_transpose_out_dim(std::size_t in, std::size_t k, int stride, int padding) {
    const long out = (static_cast<long>(in) - 1) * stride - 2L * padding + static_cast<long>(k);
    if (in == 0 || out <= 0) {
        throw ShapeError("conv_transpose2d: non-positive output size");
    }
    return static_cast<std::size_t>(out);
}

Tensor4 conv2d(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
               int padding) {
    const auto& xs = x.shape();
    const auto& ws = weight.shape();
    check_conv_args(weight, bias, ws.n, stride, padding, "conv2d");
    if (xs.c != ws.c) {
        throw ShapeError("conv2d: input has " + std::to_string(xs.c) + " channels, weight expects " +
                         std::to_string(ws.c));
    }
    const Geometry g = conv_geometry(xs, ws, stride, padding);
    Tensor4 out({xs.n, ws.n, g.out_h, g.out_w});
    std::vector<double> col(g.rows() * g.cols());
    for (std::size_t n = 0; n < xs.n; ++n) {
        im2col(x.plane(n, 0).data(), g, col.data());
        double* o = out.plane(n, 0).data();
        for (std::size_t oc = 0; oc < ws.n; ++oc) {
            std::fill(o + oc * g.cols(), o + (oc + 1) * g.cols(), bias.data()[oc]);
        }
        gemm_acc(weight.data().data(), col.data(), o, ws.n, g.rows(), g.cols());
    }
    return out;
}

ConvGrads conv2d_backward(const Tensor4& x, const Tensor4& weight, const Tensor4& grad_out,
                          int stride, int padding, bool compute_input) {
    const auto& xs = x.shape();
    const auto& ws = weight.shape();
    const Geometry g = conv_geometry(xs, ws, stride, padding);
    if (grad_out.shape() != Shape4{xs.n, ws.n, g.out_h, g.out_w}) {
        throw ShapeError("conv2d_backward: grad_out shape " + grad_out.shape().str());
    }
    ConvGrads grads{compute_input ? Tensor4(xs) : Tensor4(), Tensor4(ws),
                    Tensor4({1, ws.n, 1, 1})};
    std::vector<double> col(g.rows() * g.cols());
    std::vector<double> dcol(compute_input ? col.size() : 0);
    for (std::size_t n = 0; n < xs.n; ++n) {
        const double* go = grad_out.plane(n, 0).data();
        im2col(x.plane(n, 0).data(), g, col.data());
        gemm_nt_acc(go, col.data(), grads.weight.data().data(), ws.n, g.rows(), g.cols());
        for (std::size_t oc = 0; oc < ws.n; ++oc) {
            double s = 0.0;
            for (std::size_t p = 0; p < g.cols(); ++p) s += go[oc * g.cols() + p];
            grads.bias.data()[oc] += s;
        }
        if (compute_input) {
            std::fill(dcol.begin(), dcol.end(), 0.0);
            gemm_tn_acc(weight.data().data(), go, dcol.data(), ws.n, g.rows(), g.cols());
            col2im(dcol.data(), g, grads.input.plane(n, 0).data());
        }
    }
    return grads;
}

Tensor4 conv_transpose2d(const Tensor4& x, const Tensor4& weight, const Tensor4& bias,
                         int stride, int padding) {
    const auto& xs = x.shape();
    const auto& ws = weight.shape();
    check_conv_args(weight, bias, ws.c, stride, padding, "conv_transpose2d");
    if (xs.c != ws.n) {
        throw ShapeError("conv_transpose2d: input has " + std::to_string(xs.c) +
                         " channels, weight expects " + std::to_string(ws.n));
    }
    const Geometry g = transpose_geometry(xs, ws, stride, padding);
    Tensor4 out({xs.n, ws.c, g.height, g.width});
    std::vector<double> col(g.rows() * g.cols());
    for (std::size_t n = 0; n < xs.n; ++n) {
        std::fill(col.begin(), col.end(), 0.0);
        gemm_tn_acc(weight.data().data(), x.plane(n, 0).data(), col.data(), ws.n, g.rows(),
                    g.cols());
        double* o = out.plane(n, 0).data();
        for (std::size_t oc = 0; oc < ws.c; ++oc) {
            std::fill(o + oc * g.height * g.width, o + (oc + 1) * g.height * g.width,
                      bias.data()[oc]);
        }
        col2im(col.data(), g, o);
    }
    return out;
}

ConvGrads conv_transpose2d_backward(const Tensor4& x, const Tensor4& weight,
                                    const Tensor4& grad_out, int stride, int padding,
                                    bool compute_input) {
    const auto& xs = x.shape();
    const auto& ws = weight.shape();
    const Geometry g = transpose_geometry(xs, ws, stride, padding);
    if (grad_out.shape() != Shape4{xs.n, ws.c, g.height, g.width}) {
        throw ShapeError("conv_transpose2d_backward: grad_out shape " + grad_out.shape().str());
    }
    ConvGrads grads{compute_input ? Tensor4(xs) : Tensor4(), Tensor4(ws),
                    Tensor4({1, ws.c, 1, 1})};
    std::vector<double> gcol(g.rows() * g.cols());
    for (std::size_t n = 0; n < xs.n; ++n) {
        const double* go = grad_out.plane(n, 0).data();
        im2col(go, g, gcol.data());
        gemm_nt_acc(x.plane(n, 0).data(), gcol.data(), grads.weight.data().data(), ws.n,
                    g.rows(), g.cols());
        if (compute_input) {
            gemm_acc(weight.data().data(), gcol.data(), grads.input.plane(n, 0).data(), ws.n,
                     g.rows(), g.cols());
        }
        for (std::size_t oc = 0; oc < ws.c; ++oc) {
            double s = 0.0;
            for (std::size_t p = 0; p < g.height * g.width; ++p) s += go[oc * g.height * g.width + p];
            grads.bias.data()[oc] += s;
        }
    }
    return grads;
}

Tensor4 leaky_relu(const Tensor4& x, double slope) {
    Tensor4 out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double v = x.data()[i];
        out.data()[i] = v >= 0.0 ? v : slope * v;
    }
    return out;
}

Tensor4 sigmoid(const Tensor4& x) {
    Tensor4 out(x.shape());
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const double v = x.data()[i];
        // split by sign so exp never overflows
        if (v >= 0.0) {
            out.data()[i] = 1.0 / (1.0 + std::exp(-v));
        } else {
            const double e = std::exp(v);
            out.data()[i] = e / (1.0 + e);
        }
    }
    return out;
}

Tensor4 concat_channels(std::span<const Tensor4> xs) {
    if (xs.empty()) throw ShapeError("concat_channels: no inputs");
    const Shape4 first = xs[0].shape();
    std::size_t channels = 0;
    for (const auto& t : xs) {
        const auto& s = t.shape();
        if (s.n != first.n || s.h != first.h || s.w != first.w) {
            throw ShapeError("concat_channels: " + s.str() + " incompatible with " + first.str());
        }
        channels += s.c;
    }
    Tensor4 out({first.n, channels, first.h, first.w});
    const std::size_t plane = first.plane();
    for (std::size_t n = 0; n < first.n; ++n) {
        double* dst = out.plane(n, 0).data();
        for (const auto& t : xs) {
            const auto block = t.shape().c * plane;
            const double* src = t.plane(n, 0).data();
            std::copy(src, src + block, dst);
            dst += block;
        }
    }
    return out;
}

Tensor4 slice_channels(const Tensor4& x, std::size_t begin, std::size_t count) {
    const auto& s = x.shape();
    if (begin + count > s.c || count == 0) {
        throw ShapeError("slice_channels: [" + std::to_string(begin) + ", " +
                         std::to_string(begin + count) + ") out of range for " + s.str());
    }
    Tensor4 out({s.n, count, s.h, s.w});
    for (std::size_t n = 0; n < s.n; ++n) {
        const double* src = x.plane(n, begin).data();
        std::copy(src, src + count * s.plane(), out.plane(n, 0).data());
    }
    return out;
}

double l1_loss(const Tensor4& a, const Tensor4& b) {
    require_same(a, b, "l1_loss");
    if (a.numel() == 0) throw ShapeError("l1_loss: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) s += std::abs(a.data()[i] - b.data()[i]);
    return s / static_cast<double>(a.numel());
}

double mse_loss(const Tensor4& a, const Tensor4& b) {
    require_same(a, b, "mse_loss");
    if (a.numel() == 0) throw ShapeError("mse_loss: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < a.numel(); ++i) {
        const double d = a.data()[i] - b.data()[i];
        s += d * d;
    }
    return s / static_cast<double>(a.numel());
}

double bce_with_logits(const Tensor4& logits, const Tensor4& targets) {
    require_same(logits, targets, "bce_with_logits");
    if (logits.numel() == 0) throw ShapeError("bce_with_logits: empty input");
    double s = 0.0;
    for (std::size_t i = 0; i < logits.numel(); ++i) {
        const double z = logits.data()[i];
        const double t = targets.data()[i];
        s += std::max(z, 0.0) - z * t + std::log1p(std::exp(-std::abs(z)));
    }
    return s / static_cast<double>(logits.numel());
}

} // namespace lwave
