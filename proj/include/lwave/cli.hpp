#pragma once

// Subcommands behind the `lwave` executable. Each returns a process exit
// code and writes human output to `out`, diagnostics to `err`.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace lwave::cli {

enum ExitCode : int {
    exit_ok = 0,
    exit_check_failed = 1,
    exit_usage = 2,
    exit_shape = 3,
    exit_numeric = 4,
};

struct DecomposeOptions {
    std::filesystem::path input;
    std::string wavelet = "db2";
    int levels = 1;
    std::filesystem::path out = "subbands";
};

/// Writes <out>/level<k>/{ll,lh,hl,hh}.pgm for k = 1..levels plus
/// <out>/ranges.txt with the [lo, hi] each image was stretched from.
int cmd_decompose(const DecomposeOptions& opts, std::ostream& out, std::ostream& err);

struct GradcheckOptions {
    std::uint64_t seed = 0;
    bool inject_fault = false; // corrupts the conv2d weight gradient
};

int cmd_gradcheck(const GradcheckOptions& opts, std::ostream& out, std::ostream& err);

struct TrainOptions {
    std::optional<std::filesystem::path> config; // built-in defaults when absent
    std::vector<std::string> overrides;          // "key=value"
    std::filesystem::path out = "run";
};

/// Baseline vs L-WaveBlock comparison. Writes losses.csv, report.txt,
/// config.txt, history_<variant>.csv and <variant>.lwg.
int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err);

/// Prints "psnr_db=<v|inf> ssim=<v>" with max_val 255; SSIM is averaged over
/// colour channels.
int cmd_eval(const std::filesystem::path& a, const std::filesystem::path& b, std::ostream& out,
             std::ostream& err);

} // namespace lwave::cli
