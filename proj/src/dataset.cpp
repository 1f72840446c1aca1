#include "lwave/dataset.hpp"

#include "lwave/error.hpp"

#include <algorithm>
#include <random>
#include <string>

namespace lwave::data {
namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

Matrix make_clean(std::size_t size, Rng& rng) {
    Matrix img(size, size);
    const double base = uniform(rng, 0.2, 0.6);
    const double gx = uniform(rng, -0.3, 0.3);
    const double gy = uniform(rng, -0.3, 0.3);
    const double inv = 1.0 / static_cast<double>(size);
    for (std::size_t r = 0; r < size; ++r) {
        for (std::size_t c = 0; c < size; ++c) {
            img(r, c) = base + gx * (static_cast<double>(c) * inv - 0.5) +
                        gy * (static_cast<double>(r) * inv - 0.5);
        }
    }

    auto random_rect = [&](std::size_t& r0, std::size_t& c0, std::size_t& r1, std::size_t& c1) {
        const std::size_t min_side = std::max<std::size_t>(2, size / 8);
        const std::size_t h = uniform_index(rng, min_side, size / 2);
        const std::size_t w = uniform_index(rng, min_side, size / 2);
        r0 = uniform_index(rng, 0, size - h);
        c0 = uniform_index(rng, 0, size - w);
        r1 = r0 + h;
        c1 = c0 + w;
    };

    const std::size_t rects = uniform_index(rng, 1, 3);
    for (std::size_t i = 0; i < rects; ++i) {
        std::size_t r0, c0, r1, c1;
        random_rect(r0, c0, r1, c1);
        const double level = uniform(rng, 0.0, 1.0);
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = c0; c < c1; ++c) img(r, c) = level;
        }
    }

    if (uniform(rng, 0.0, 1.0) < 0.5) {
        std::size_t r0, c0, r1, c1;
        random_rect(r0, c0, r1, c1);
        const std::size_t period = std::size_t{1} << uniform_index(rng, 1, 2);
        const double lo = uniform(rng, 0.0, 0.4);
        const double hi = uniform(rng, 0.6, 1.0);
        for (std::size_t r = r0; r < r1; ++r) {
            for (std::size_t c = c0; c < c1; ++c) {
                img(r, c) = ((r / period + c / period) % 2 == 0) ? lo : hi;
            }
        }
    }

    for (double& v : img.data()) v = std::clamp(v, 0.0, 1.0);
    return img;
}

Matrix box_blur(const Matrix& img, int kernel) {
    const long half = kernel / 2;
    const long rows = static_cast<long>(img.rows());
    const long cols = static_cast<long>(img.cols());
    Matrix out(img.rows(), img.cols());
    const double norm = static_cast<double>(kernel) * kernel;
    for (long r = 0; r < rows; ++r) {
        for (long c = 0; c < cols; ++c) {
            double s = 0.0;
            for (long dr = -half; dr <= half; ++dr) {
                const long rr = std::clamp(r + dr, 0L, rows - 1);
                for (long dc = -half; dc <= half; ++dc) {
                    s += img(static_cast<std::size_t>(rr),
                             static_cast<std::size_t>(std::clamp(c + dc, 0L, cols - 1)));
                }
            }
            out(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) = s / norm;
        }
    }
    return out;
}

} // namespace

CorruptionKind parse_corruption(std::string_view name) {
    if (name == "gaussian_noise") return CorruptionKind::gaussian_noise;
    if (name == "box_blur") return CorruptionKind::box_blur;
    throw InvalidConfig("unknown corruption '" + std::string(name) +
                        "' (expected gaussian_noise or box_blur)");
}

std::string_view to_string(CorruptionKind kind) noexcept {
    return kind == CorruptionKind::gaussian_noise ? "gaussian_noise" : "box_blur";
}

std::vector<ImagePair> synth_dataset(std::uint64_t seed, std::size_t count, std::size_t size,
                                     const Corruption& corruption) {
    if (count == 0) throw InvalidConfig("synth_dataset: count must be positive");
    if (size < 4) throw InvalidConfig("synth_dataset: size must be at least 4");
    if (corruption.kind == CorruptionKind::gaussian_noise && !(corruption.sigma >= 0.0)) {
        throw InvalidConfig("synth_dataset: sigma must be non-negative");
    }
    if (corruption.kind == CorruptionKind::box_blur &&
        (corruption.kernel < 1 || corruption.kernel % 2 == 0)) {
        throw InvalidConfig("synth_dataset: blur kernel must be a positive odd integer");
    }

    Rng rng(seed);
    std::vector<ImagePair> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Matrix clean = make_clean(size, rng);
        Matrix corrupted;
        if (corruption.kind == CorruptionKind::gaussian_noise) {
            corrupted = clean;
            if (corruption.sigma > 0.0) {
                std::normal_distribution<double> noise(0.0, corruption.sigma);
                for (double& v : corrupted.data()) v = std::clamp(v + noise(rng), 0.0, 1.0);
            }
        } else {
            corrupted = box_blur(clean, corruption.kernel);
        }
        out.push_back({std::move(corrupted), std::move(clean)});
    }
    return out;
}

} // namespace lwave::data
