#include "lwave/init.hpp"

#include <cmath>

namespace lwave {
namespace {

void fill_normal(Tensor4& t, double stddev, Rng& rng) {
    std::normal_distribution<double> dist(0.0, stddev);
    for (double& v : t.data()) v = dist(rng);
}

} // namespace

ConvParams init_conv(std::size_t out_channels, std::size_t in_channels, std::size_t kernel,
                     int stride, int padding, Rng& rng) {
    auto p = ConvParams::zeros(out_channels, in_channels, kernel, kernel, out_channels, stride,
                               padding);
    fill_normal(p.weight, std::sqrt(2.0 / static_cast<double>(in_channels * kernel * kernel)), rng);
    return p;
}

ConvParams init_conv_transpose(std::size_t in_channels, std::size_t out_channels,
                               std::size_t kernel, int stride, int padding, Rng& rng) {
    auto p = ConvParams::zeros(in_channels, out_channels, kernel, kernel, out_channels, stride,
                               padding);
    fill_normal(p.weight, std::sqrt(2.0 / static_cast<double>(in_channels * kernel * kernel)), rng);
    return p;
}

} // namespace lwave
