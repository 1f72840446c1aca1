#include "lwave/gradcheck.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace lwave::ag {
namespace {

double evaluate(const std::function<Var(Tape&)>& graph) {
    Tape tape;
    return tape.value(graph(tape)).item();
}

std::vector<std::size_t> pick_coords(std::size_t numel, std::size_t limit, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(numel);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    if (limit == 0 || limit >= numel) return idx;
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(limit);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

double relative_error(double analytic, double numeric) noexcept {
    return std::abs(analytic - numeric) / std::max(1e-8, std::abs(analytic) + std::abs(numeric));
}

GradCheckResult grad_check(const std::function<Var(Tape&)>& graph,
                           std::span<Tensor4* const> targets, const GradCheckOptions& opts) {
    if (!(opts.eps > 0.0)) throw InvalidConfig("grad_check: eps must be positive");

    std::vector<Tensor4> analytic;
    {
        Tape tape(opts.fault);
        const Var loss = graph(tape);
        tape.backward(loss);
        for (Tensor4* t : targets) {
            const Tensor4* g = tape.param_grad(*t);
            analytic.push_back(g != nullptr ? *g : Tensor4(t->shape()));
        }
    }

    std::mt19937_64 rng(opts.seed);
    GradCheckResult result;
    for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        Tensor4& target = *targets[ti];
        for (std::size_t i : pick_coords(target.numel(), opts.max_coords_per_target, rng)) {
            const double saved = target.data()[i];
            target.data()[i] = saved + opts.eps;
            const double plus = evaluate(graph);
            target.data()[i] = saved - opts.eps;
            const double minus = evaluate(graph);
            target.data()[i] = saved;
            const double numeric = (plus - minus) / (2.0 * opts.eps);
            result.max_rel_error =
                std::max(result.max_rel_error, relative_error(analytic[ti].data()[i], numeric));
            ++result.coords_checked;
        }
    }
    return result;
}

GradCheckResult grad_check(const std::function<Var(Tape&, std::span<const Var>)>& graph,
                           std::vector<Tensor4> inputs, const GradCheckOptions& opts) {
    std::vector<Tensor4*> targets;
    for (Tensor4& t : inputs) targets.push_back(&t);
    auto bound = [&](Tape& tape) {
        std::vector<Var> vars;
        for (Tensor4& t : inputs) vars.push_back(tape.parameter(t));
        return graph(tape, vars);
    };
    return grad_check(bound, targets, opts);
}

} // namespace lwave::ag
