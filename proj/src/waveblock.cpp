#include "lwave/waveblock.hpp"

#include "lwave/binary_io.hpp"
#include "lwave/error.hpp"

#include <array>
#include <string>

namespace lwave {
namespace {

constexpr std::size_t kKernel = 3;
constexpr std::size_t kUpKernel = 2;
constexpr int kUpStride = 2;

void validate(const LWaveBlockConfig& c) {
    if (c.in_channels < 1 || c.path_channels < 1) {
        throw InvalidConfig("L-WaveBlock: in_channels and path_channels must be >= 1");
    }
    if (!(c.slope >= 0.0 && c.slope < 1.0)) {
        throw InvalidConfig("L-WaveBlock: activation slope must be in [0, 1)");
    }
}

template <typename Params>
auto path_list(Params& p) {
    return std::array{&p.ll_conv1, &p.ll_conv2, &p.lh_conv, &p.hl_conv, &p.hh_conv,
                      &p.ll_up,    &p.lh_up,    &p.hl_up,   &p.hh_up,   &p.bypass_conv};
}

// Allocates every tensor with its final shape; values are zero.
LWaveBlockParams shaped(const LWaveBlockConfig& c) {
    validate(c);
    const auto in = static_cast<std::size_t>(c.in_channels);
    const auto pc = static_cast<std::size_t>(c.path_channels);
    auto conv = [](std::size_t out, std::size_t cin) {
        return ConvParams::zeros(out, cin, kKernel, kKernel, out, 1, 1);
    };
    auto up = [pc] {
        return ConvParams::zeros(pc, pc, kUpKernel, kUpKernel, pc, kUpStride, 0);
    };
    return {c,           conv(pc, in), conv(pc, pc), conv(pc, in), conv(pc, in), conv(pc, in),
            up(),        up(),         up(),         up(),         conv(pc, in)};
}

} // namespace

std::vector<Tensor4*> LWaveBlockParams::parameters() {
    std::vector<Tensor4*> out;
    for (ConvParams* p : path_list(*this)) {
        out.push_back(&p->weight);
        out.push_back(&p->bias);
    }
    return out;
}

std::vector<const Tensor4*> LWaveBlockParams::parameters() const {
    std::vector<const Tensor4*> out;
    for (const ConvParams* p : path_list(*this)) {
        out.push_back(&p->weight);
        out.push_back(&p->bias);
    }
    return out;
}

std::size_t LWaveBlockParams::parameter_count() const {
    std::size_t n = 0;
    for (const Tensor4* t : parameters()) n += t->numel();
    return n;
}

LWaveBlockParams lwaveblock_init(const LWaveBlockConfig& config, std::mt19937_64& rng) {
    LWaveBlockParams p = shaped(config);
    const auto in = static_cast<std::size_t>(config.in_channels);
    const auto pc = static_cast<std::size_t>(config.path_channels);
    p.ll_conv1 = init_conv(pc, in, kKernel, 1, 1, rng);
    p.ll_conv2 = init_conv(pc, pc, kKernel, 1, 1, rng);
    p.lh_conv = init_conv(pc, in, kKernel, 1, 1, rng);
    p.hl_conv = init_conv(pc, in, kKernel, 1, 1, rng);
    p.hh_conv = init_conv(pc, in, kKernel, 1, 1, rng);
    p.ll_up = init_conv_transpose(pc, pc, kUpKernel, kUpStride, 0, rng);
    p.lh_up = init_conv_transpose(pc, pc, kUpKernel, kUpStride, 0, rng);
    p.hl_up = init_conv_transpose(pc, pc, kUpKernel, kUpStride, 0, rng);
    p.hh_up = init_conv_transpose(pc, pc, kUpKernel, kUpStride, 0, rng);
    p.bypass_conv = init_conv(pc, in, kKernel, 1, 1, rng);
    return p;
}

LWaveBlockParams lwaveblock_init(const LWaveBlockConfig& config, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return lwaveblock_init(config, rng);
}

ag::Var lwaveblock_forward(ag::Tape& tape, const LWaveBlockParams& params, ag::Var x,
                           bool trainable) {
    const auto& cfg = params.config;
    const Shape4& s = tape.value(x).shape();
    const auto in = static_cast<std::size_t>(cfg.in_channels);
    if (s.c != in) {
        throw ShapeError("L-WaveBlock: input has " + std::to_string(s.c) +
                         " channels, block expects " + std::to_string(in));
    }
    if (s.h % 2 != 0 || s.w % 2 != 0) {
        throw ShapeError("L-WaveBlock: spatial dims of " + s.str() + " must be even");
    }
    const double a = cfg.slope;
    auto conv_act = [&](ag::Var v, const ConvParams& p) {
        return ag::leaky_relu(ag::conv2d(tape, v, p, trainable), a);
    };
    auto up_act = [&](ag::Var v, const ConvParams& p) {
        return ag::leaky_relu(ag::conv_transpose2d(tape, v, p, trainable), a);
    };

    const ag::Var bands = ag::dwt2d(x, wavelet::filters_for(cfg.wavelet));
    const ag::Var ll = ag::slice_channels(bands, 0 * in, in);
    const ag::Var lh = ag::slice_channels(bands, 1 * in, in);
    const ag::Var hl = ag::slice_channels(bands, 2 * in, in);
    const ag::Var hh = ag::slice_channels(bands, 3 * in, in);

    const std::array<ag::Var, 5> paths{
        up_act(conv_act(conv_act(ll, params.ll_conv1), params.ll_conv2), params.ll_up),
        up_act(conv_act(lh, params.lh_conv), params.lh_up),
        up_act(conv_act(hl, params.hl_conv), params.hl_up),
        up_act(conv_act(hh, params.hh_conv), params.hh_up),
        conv_act(x, params.bypass_conv),
    };
    return ag::concat_channels(paths);
}

Tensor4 lwaveblock_forward(const LWaveBlockParams& params, const Tensor4& x) {
    ag::Tape tape;
    return tape.value(lwaveblock_forward(tape, params, tape.constant(x), false));
}

std::vector<Tensor4> lwaveblock_gradients(const LWaveBlockParams& params, const Tensor4& x,
                                          const Tensor4& upstream) {
    ag::Tape tape;
    const ag::Var out = lwaveblock_forward(tape, params, tape.constant(x), true);
    if (tape.value(out).shape() != upstream.shape()) {
        throw ShapeError("lwaveblock_gradients: upstream shape " + upstream.shape().str() +
                         " does not match output " + tape.value(out).shape().str());
    }
    tape.backward(ag::weighted_sum(out, upstream));
    std::vector<Tensor4> grads;
    for (const Tensor4* p : params.parameters()) grads.push_back(*tape.param_grad(*p));
    return grads;
}

std::vector<std::uint8_t> serialize(const LWaveBlockParams& params) {
    const auto& c = params.config;
    ByteWriter w;
    w.put_magic("LWB1");
    w.put_u32(static_cast<std::uint32_t>(c.in_channels));
    w.put_u32(static_cast<std::uint32_t>(c.path_channels));
    w.put_u32(c.wavelet == wavelet::Family::haar ? 0u : 1u);
    w.put_u32(static_cast<std::uint32_t>(params.parameter_count()));
    w.put_f64(c.slope);
    for (const Tensor4* t : params.parameters()) {
        for (double v : t->data()) w.put_f64(v);
    }
    return w.take();
}

LWaveBlockParams deserialize_lwaveblock(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_magic("LWB1");
    LWaveBlockConfig c;
    c.in_channels = static_cast<int>(r.get_u32());
    c.path_channels = static_cast<int>(r.get_u32());
    const std::uint32_t family = r.get_u32();
    if (family > 1) throw MalformedHeader("LWB1: unknown wavelet id " + std::to_string(family));
    c.wavelet = family == 0 ? wavelet::Family::haar : wavelet::Family::db2;
    const std::uint32_t count = r.get_u32();
    c.slope = r.get_f64();
    LWaveBlockParams p;
    try {
        p = shaped(c);
    } catch (const InvalidConfig& e) {
        throw MalformedHeader(std::string("LWB1: ") + e.what());
    }
    if (count != p.parameter_count()) {
        throw MalformedHeader("LWB1: value count " + std::to_string(count) +
                              " does not match configuration (" +
                              std::to_string(p.parameter_count()) + ")");
    }
    for (Tensor4* t : p.parameters()) {
        for (double& v : t->data()) v = r.get_f64();
    }
    return p;
}

} // namespace lwave
