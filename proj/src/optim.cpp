#include "lwave/optim.hpp"

#include "lwave/error.hpp"

#include <cmath>
#include <string>

namespace lwave {
namespace {

void check_pairs(std::span<Tensor4* const> params, std::span<const Tensor4> grads,
                 const char* op) {
    if (params.size() != grads.size()) {
        throw ShapeError(std::string(op) + ": parameter and gradient counts differ");
    }
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (params[i]->shape() != grads[i].shape()) {
            throw ShapeError(std::string(op) + ": gradient " + std::to_string(i) + " has shape " +
                             grads[i].shape().str() + ", parameter has " +
                             params[i]->shape().str());
        }
    }
}

} // namespace

void sgd_step(std::span<Tensor4* const> params, std::span<const Tensor4> grads, double lr) {
    check_pairs(params, grads, "sgd_step");
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i]->data();
        const auto& g = grads[i].data();
        for (std::size_t j = 0; j < p.size(); ++j) p[j] -= lr * g[j];
    }
}

void adam_step(std::span<Tensor4* const> params, AdamState& state,
               std::span<const Tensor4> grads, const AdamConfig& cfg) {
    check_pairs(params, grads, "adam_step");
    if (state.m.empty()) {
        for (const Tensor4* p : params) {
            state.m.emplace_back(p->shape());
            state.v.emplace_back(p->shape());
        }
    }
    if (state.m.size() != params.size()) {
        throw ShapeError("adam_step: optimizer state was built for a different parameter set");
    }
    ++state.step;
    const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (std::size_t i = 0; i < params.size(); ++i) {
        auto& p = params[i]->data();
        auto& m = state.m[i].data();
        auto& v = state.v[i].data();
        const auto& g = grads[i].data();
        for (std::size_t j = 0; j < p.size(); ++j) {
            m[j] = cfg.beta1 * m[j] + (1.0 - cfg.beta1) * g[j];
            v[j] = cfg.beta2 * v[j] + (1.0 - cfg.beta2) * g[j] * g[j];
            const double mhat = m[j] / bc1;
            const double vhat = v[j] / bc2;
            p[j] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.eps);
        }
    }
}

} // namespace lwave
