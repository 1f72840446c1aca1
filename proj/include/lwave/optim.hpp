#pragma once

#include "lwave/tensor.hpp"

#include <span>
#include <vector>

namespace lwave {

/// theta <- theta - lr * grad, for each (param, grad) pair.
void sgd_step(std::span<Tensor4* const> params, std::span<const Tensor4> grads, double lr);

struct AdamConfig {
    double lr = 2e-4;
    double beta1 = 0.5;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// First/second moment estimates, one entry per parameter tensor.
struct AdamState {
    std::vector<Tensor4> m;
    std::vector<Tensor4> v;
    long step = 0;
};

/// Bias-corrected Adam update. State is lazily sized on the first call.
void adam_step(std::span<Tensor4* const> params, AdamState& state,
               std::span<const Tensor4> grads, const AdamConfig& cfg);

} // namespace lwave
