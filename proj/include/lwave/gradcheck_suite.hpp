#pragma once

// The standard gradient-check suite: every differentiable layer, the full
// L-WaveBlock and small generator/discriminator graphs.

#include "lwave/gradcheck.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace lwave::ag {

inline constexpr double kGradCheckTolerance = 1e-4;
inline constexpr double kGradCheckEps = 1e-5;

struct SuiteItem {
    std::string name;
    GradCheckResult result;

    bool passed() const noexcept { return result.max_rel_error < kGradCheckTolerance; }
};

std::vector<SuiteItem> run_gradcheck_suite(std::uint64_t seed, Fault fault = Fault::none);

} // namespace lwave::ag
