#pragma once

#include "lwave/autograd.hpp"

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace lwave::ag {

struct GradCheckOptions {
    double eps = 1e-5;
    /// Coordinates sampled per target tensor; 0 checks every coordinate.
    std::size_t max_coords_per_target = 0;
    std::uint64_t seed = 0;
    Fault fault = Fault::none;
};

struct GradCheckResult {
    double max_rel_error = 0.0;
    std::size_t coords_checked = 0;
};

/// Relative error used by the checker: |a - n| / max(1e-8, |a| + |n|).
double relative_error(double analytic, double numeric) noexcept;

/// Compares reverse-mode gradients of a scalar graph against central
/// differences. `graph` must register every target through
/// Tape::parameter(); targets are perturbed in place and restored.
GradCheckResult grad_check(const std::function<Var(Tape&)>& graph,
                           std::span<Tensor4* const> targets,
                           const GradCheckOptions& opts = {});

/// Convenience form over owned inputs: `graph` receives one Var per input.
GradCheckResult grad_check(const std::function<Var(Tape&, std::span<const Var>)>& graph,
                           std::vector<Tensor4> inputs, const GradCheckOptions& opts = {});

} // namespace lwave::ag
