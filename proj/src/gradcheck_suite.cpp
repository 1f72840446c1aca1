#include "lwave/gradcheck_suite.hpp"

#include "lwave/error.hpp"
#include "lwave/models.hpp"
#include "lwave/waveblock.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <optional>
#include <random>

namespace lwave::ag {
namespace {

using Rng = std::mt19937_64;

Tensor4 random_tensor(Shape4 s, Rng& rng, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Tensor4 t(s);
    for (double& v : t.data()) v = dist(rng);
    return t;
}

// Reduces a tensor to a scalar through fixed random weights, so every output
// coordinate contributes a generic amount to the checked gradient.
Var project(Var out, std::uint64_t seed) {
    Rng r(seed);
    return weighted_sum(out, random_tensor(out.tape->value(out).shape(), r));
}

GradCheckResult merge(GradCheckResult a, const GradCheckResult& b) {
    a.max_rel_error = std::max(a.max_rel_error, b.max_rel_error);
    a.coords_checked += b.coords_checked;
    return a;
}

struct ConvCase {
    Shape4 x;
    Shape4 w;
    int stride;
    int padding;
};

GradCheckResult check_conv(const std::array<ConvCase, 2>& cases, bool transposed, Rng& rng,
                           const GradCheckOptions& opts) {
    GradCheckResult total;
    for (const auto& c : cases) {
        const std::size_t bias_len = transposed ? c.w.c : c.w.n;
        std::vector<Tensor4> inputs{random_tensor(c.x, rng), random_tensor(c.w, rng),
                                    random_tensor({1, bias_len, 1, 1}, rng)};
        const std::uint64_t proj = rng();
        total = merge(total, grad_check(
                                 [&](Tape&, std::span<const Var> v) {
                                     const Var out =
                                         transposed
                                             ? conv_transpose2d(v[0], v[1], v[2], c.stride, c.padding)
                                             : conv2d(v[0], v[1], v[2], c.stride, c.padding);
                                     return project(out, proj);
                                 },
                                 std::move(inputs), opts));
    }
    return total;
}

template <typename Op>
GradCheckResult check_unary(Op op, const std::array<Shape4, 2>& shapes, Rng& rng,
                            const GradCheckOptions& opts) {
    GradCheckResult total;
    for (const Shape4& s : shapes) {
        const std::uint64_t proj = rng();
        total = merge(total, grad_check(
                                 [&](Tape&, std::span<const Var> v) { return project(op(v[0]), proj); },
                                 {random_tensor(s, rng)}, opts));
    }
    return total;
}

template <typename Loss>
GradCheckResult check_loss(Loss loss, const std::array<Shape4, 2>& shapes, Rng& rng,
                           const GradCheckOptions& opts, double tlo, double thi) {
    GradCheckResult total;
    for (const Shape4& s : shapes) {
        total = merge(total, grad_check(
                                 [&](Tape&, std::span<const Var> v) { return loss(v[0], v[1]); },
                                 {random_tensor(s, rng), random_tensor(s, rng, tlo, thi)}, opts));
    }
    return total;
}

void randomize_biases(const std::vector<Tensor4*>& params, Rng& rng) {
    for (Tensor4* p : params) {
        if (p->shape().n == 1) *p = random_tensor(p->shape(), rng, -0.1, 0.1);
    }
}

// Central differences straddling a LeakyReLU kink measure the kink, not the
// gradient. Redraw until no pre-activation is within reach of the probe.
constexpr double kKinkMargin = 1e-4;

void redraw_until_smooth(Rng& rng, const std::function<void(Rng&)>& draw,
                         const std::function<Var(Tape&)>& forward) {
    for (int attempt = 0; attempt < 64; ++attempt) {
        draw(rng);
        Tape t;
        forward(t);
        if (t.kink_distance() > kKinkMargin) return;
    }
    throw Error("gradcheck: could not draw inputs away from activation kinks");
}

} // namespace

std::vector<SuiteItem> run_gradcheck_suite(std::uint64_t seed, Fault fault) {
    Rng rng(seed);
    GradCheckOptions opts;
    opts.eps = kGradCheckEps;
    opts.fault = fault;
    opts.seed = seed;

    std::vector<SuiteItem> items;
    items.push_back({"conv2d",
                     check_conv({ConvCase{{2, 3, 7, 7}, {4, 3, 3, 3}, 1, 1},
                                 ConvCase{{1, 2, 8, 8}, {3, 2, 4, 4}, 2, 1}},
                                false, rng, opts)});
    items.push_back({"conv_transpose2d",
                     check_conv({ConvCase{{2, 3, 4, 4}, {3, 2, 2, 2}, 2, 0},
                                 ConvCase{{1, 2, 5, 5}, {2, 3, 3, 3}, 2, 1}},
                                true, rng, opts)});
    const std::array<Shape4, 2> small{Shape4{2, 3, 4, 4}, Shape4{1, 5, 6, 2}};
    items.push_back({"leaky_relu",
                     check_unary([](Var x) { return leaky_relu(x, 0.2); }, small, rng, opts)});
    items.push_back({"sigmoid", check_unary([](Var x) { return sigmoid(x); }, small, rng, opts)});
    items.push_back({"concat_slice", check_unary(
                                         [](Var x) {
                                             const std::size_t c = x.tape->value(x).shape().c;
                                             const std::array<Var, 3> parts{
                                                 slice_channels(x, 1, c - 1), x,
                                                 slice_channels(x, 0, 1)};
                                             return concat_channels(parts);
                                         },
                                         small, rng, opts)});
    const std::array<Shape4, 2> even{Shape4{2, 2, 8, 8}, Shape4{1, 3, 4, 6}};
    for (auto family : {wavelet::Family::haar, wavelet::Family::db2}) {
        const auto filters = wavelet::filters_for(family);
        items.push_back({"dwt2d_" + std::string(wavelet::to_string(family)),
                         check_unary([&](Var x) { return dwt2d(x, filters); }, even, rng, opts)});
    }
    items.push_back({"l1_loss", check_loss([](Var a, Var b) { return l1_loss(a, b); }, small,
                                           rng, opts, -1.0, 1.0)});
    items.push_back({"mse_loss", check_loss([](Var a, Var b) { return mse_loss(a, b); }, small,
                                            rng, opts, -1.0, 1.0)});
    items.push_back({"bce_with_logits",
                     check_loss([](Var a, Var b) { return bce_with_logits(a, b); }, small, rng,
                                opts, 0.0, 1.0)});

    {
        LWaveBlockParams block;
        Tensor4 x;
        Tensor4 target;
        redraw_until_smooth(rng, [&](Rng& r) {
            block = lwaveblock_init({2, 3, wavelet::Family::db2, 0.2}, r());
            randomize_biases(block.parameters(), r);
            x = random_tensor({1, 2, 8, 8}, r);
            // Residuals skewed to one side so no channel's L1 signs cancel to
            // an exactly zero bias gradient, and kept clear of the L1 kink.
            target = lwaveblock_forward(block, x);
            std::uniform_real_distribution<double> off(0.01, 0.5);
            std::bernoulli_distribution below(0.7);
            for (double& v : target.data()) v += below(r) ? -off(r) : off(r);
        }, [&](Tape& t) { return lwaveblock_forward(t, block, t.parameter(x)); });
        std::vector<Tensor4*> targets = block.parameters();
        targets.push_back(&x);
        items.push_back({"lwaveblock", grad_check(
                                           [&](Tape& t) {
                                               const Var out =
                                                   lwaveblock_forward(t, block, t.parameter(x));
                                               return l1_loss(out, t.constant(target));
                                           },
                                           targets, opts)});
    }

    // Depth 1 on 8x8 keeps float noise in the loss well below the smallest
    // parameter derivatives; deeper graphs are covered layer by layer above.
    for (bool use_block : {false, true}) {
        GeneratorConfig gc;
        gc.depth = 1;
        gc.base_channels = 4;
        gc.use_waveblock = use_block;
        gc.waveblock_channels = {2};
        std::optional<Generator> gen;
        Tensor4 x;
        std::uint64_t proj = 0;
        redraw_until_smooth(rng, [&](Rng& r) {
            gc.seed = r();
            gen.emplace(gc);
            randomize_biases(gen->parameters(), r);
            x = random_tensor({2, 1, 8, 8}, r, 0.0, 1.0);
            proj = r();
        }, [&](Tape& t) { return gen->forward(t, t.parameter(x)); });
        std::vector<Tensor4*> targets = gen->parameters();
        targets.push_back(&x);
        GradCheckOptions gopts = opts;
        gopts.max_coords_per_target = 24;
        items.push_back({use_block ? "generator_waveblock" : "generator_baseline",
                         grad_check(
                             // smooth projection; an L1 kink would sit inside the graph
                             [&](Tape& t) { return project(gen->forward(t, t.parameter(x)), proj); },
                             targets, gopts)});
    }

    {
        std::optional<Discriminator> disc;
        Tensor4 x;
        redraw_until_smooth(rng, [&](Rng& r) {
            disc.emplace(r());
            x = random_tensor({2, 1, 16, 16}, r, 0.0, 1.0);
        }, [&](Tape& t) { return disc->forward(t, t.parameter(x)); });
        std::vector<Tensor4*> targets = disc->parameters();
        targets.push_back(&x);
        GradCheckOptions dopts = opts;
        dopts.max_coords_per_target = 32;
        items.push_back({"discriminator", grad_check(
                                              [&](Tape& t) {
                                                  const Var logits = disc->forward(t, t.parameter(x));
                                                  const Tensor4 ones(t.value(logits).shape(), 1.0);
                                                  return bce_with_logits(logits, t.constant(ones));
                                              },
                                              targets, dopts)});
    }
    return items;
}

} // namespace lwave::ag
