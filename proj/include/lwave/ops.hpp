#pragma once

// Forward kernels and their vector-Jacobian products. These are pure
// functions; the autograd layer records them on a tape.

#include "lwave/tensor.hpp"

#include <span>
#include <vector>

namespace lwave {

/// Weights and bias of a (transposed) convolution.
///
/// For conv2d the weight is (out_channels, in_channels, kH, kW) and the bias
/// has out_channels entries. For conv_transpose2d the weight is read as
/// (in_channels, out_channels, kH, kW) and the bias has out_channels entries,
/// so the same weight tensor drives a convolution and its adjoint.
struct ConvParams {
    Tensor4 weight;
    Tensor4 bias; // shape (1, channels, 1, 1)
    int stride = 1;
    int padding = 0;

    static ConvParams zeros(std::size_t d0, std::size_t d1, std::size_t kh, std::size_t kw,
                            std::size_t bias_len, int stride, int padding);
};

std::size_t conv_out_dim(std::size_t in, std::size_t k, int stride, int padding);
std::size_t conv_transpose_out_dim(std::size_t in, std::size_t k, int stride, int padding);

Tensor4 conv2d(const Tensor4& x, const Tensor4& weight, const Tensor4& bias, int stride,
               int padding);
inline Tensor4 conv2d(const Tensor4& x, const ConvParams& p) {
    return conv2d(x, p.weight, p.bias, p.stride, p.padding);
}

struct ConvGrads {
    Tensor4 input;
    Tensor4 weight;
    Tensor4 bias;
};

/// VJP of conv2d. Pass compute_input=false to skip the input gradient.
ConvGrads conv2d_backward(const Tensor4& x, const Tensor4& weight, const Tensor4& grad_out,
                          int stride, int padding, bool compute_input = true);

Tensor4 conv_transpose2d(const Tensor4& x, const Tensor4& weight, const Tensor4& bias,
                         int stride, int padding);
inline Tensor4 conv_transpose2d(const Tensor4& x, const ConvParams& p) {
    return conv_transpose2d(x, p.weight, p.bias, p.stride, p.padding);
}

ConvGrads conv_transpose2d_backward(const Tensor4& x, const Tensor4& weight,
                                    const Tensor4& grad_out, int stride, int padding,
                                    bool compute_input = true);

Tensor4 leaky_relu(const Tensor4& x, double slope);
Tensor4 sigmoid(const Tensor4& x);

Tensor4 concat_channels(std::span<const Tensor4> xs);
Tensor4 slice_channels(const Tensor4& x, std::size_t begin, std::size_t count);

double l1_loss(const Tensor4& a, const Tensor4& b);
double mse_loss(const Tensor4& a, const Tensor4& b);
/// Mean binary cross-entropy of sigmoid(logits) against targets in [0, 1].
double bce_with_logits(const Tensor4& logits, const Tensor4& targets);

} // namespace lwave
