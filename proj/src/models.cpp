#include "lwave/models.hpp"

#include "lwave/binary_io.hpp"
#include "lwave/error.hpp"
#include "lwave/init.hpp"

#include <array>
#include <string>

namespace lwave {
namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

void append(std::vector<Tensor4*>& out, ConvParams& p) {
    out.push_back(&p.weight);
    out.push_back(&p.bias);
}

void append(std::vector<const Tensor4*>& out, const ConvParams& p) {
    out.push_back(&p.weight);
    out.push_back(&p.bias);
}

} // namespace

void GeneratorConfig::validate() const {
    if (depth < 1 || depth > 8) throw InvalidConfig("generator: depth must be in [1, 8]");
    if (base_channels < 1) throw InvalidConfig("generator: base_channels must be >= 1");
    if (in_channels < 1 || out_channels < 1) {
        throw InvalidConfig("generator: in/out channels must be >= 1");
    }
    if (!(slope >= 0.0 && slope < 1.0)) throw InvalidConfig("generator: slope must be in [0, 1)");
    if (use_waveblock) {
        if (waveblock_channels.size() != 1 &&
            waveblock_channels.size() != static_cast<std::size_t>(depth)) {
            throw InvalidConfig("generator: waveblock_channels needs 1 or depth entries");
        }
        for (int c : waveblock_channels) {
            if (c < 1) throw InvalidConfig("generator: waveblock_channels must be >= 1");
        }
    }
}

int GeneratorConfig::channels_at(int level) const {
    return level == 0 ? base_channels : base_channels << (level - 1);
}

int GeneratorConfig::waveblock_channels_at(int level) const {
    return waveblock_channels.size() == 1 ? waveblock_channels[0]
                                          : waveblock_channels[static_cast<std::size_t>(level)];
}

Generator::Generator(GeneratorConfig config) : config_(std::move(config)) {
    config_.validate();
    Rng rng(config_.seed);
    const int D = config_.depth;
    auto ch = [this](int level) { return static_cast<std::size_t>(config_.channels_at(level)); };

    stem_ = init_conv(ch(0), static_cast<std::size_t>(config_.in_channels), 3, 1, 1, rng);
    for (int l = 1; l <= D; ++l) encoder_.push_back(init_conv(ch(l), ch(l - 1), 4, 2, 1, rng));
    bottleneck_ = init_conv(ch(D), ch(D), 3, 1, 1, rng);

    up_.resize(static_cast<std::size_t>(D));
    fuse_.resize(static_cast<std::size_t>(D));
    for (int l = D; l >= 1; --l) {
        const std::size_t skip_ch =
            config_.use_waveblock
                ? 5 * static_cast<std::size_t>(config_.waveblock_channels_at(l - 1))
                : ch(l - 1);
        const std::size_t from = l == D ? ch(D) : ch(l);
        up_[static_cast<std::size_t>(l - 1)] = init_conv_transpose(from, ch(l - 1), 2, 2, 0, rng);
        fuse_[static_cast<std::size_t>(l - 1)] =
            init_conv(ch(l - 1), ch(l - 1) + skip_ch, 3, 1, 1, rng);
    }
    head_ = init_conv(static_cast<std::size_t>(config_.out_channels), ch(0), 3, 1, 1, rng);

    if (config_.use_waveblock) {
        for (int l = 0; l < D; ++l) {
            blocks_.push_back(lwaveblock_init(
                {config_.channels_at(l), config_.waveblock_channels_at(l), config_.wavelet,
                 config_.slope},
                rng));
        }
    }
}

void Generator::check_input(const Shape4& s) const {
    const std::size_t div = std::size_t{1} << config_.depth;
    if (s.c != static_cast<std::size_t>(config_.in_channels)) {
        throw ShapeError("generator: input has " + std::to_string(s.c) + " channels, expected " +
                         std::to_string(config_.in_channels));
    }
    if (s.h == 0 || s.w == 0 || s.h % div != 0 || s.w % div != 0) {
        throw ShapeError("generator: spatial dims of " + s.str() + " must be divisible by " +
                         std::to_string(div));
    }
}

ag::Var Generator::forward(ag::Tape& tape, ag::Var x, bool trainable) const {
    check_input(tape.value(x).shape());
    const double a = config_.slope;
    const int D = config_.depth;
    auto conv_act = [&](ag::Var v, const ConvParams& p) {
        return ag::leaky_relu(ag::conv2d(tape, v, p, trainable), a);
    };

    std::vector<ag::Var> skips;
    skips.push_back(conv_act(x, stem_));
    for (int l = 1; l <= D; ++l) {
        skips.push_back(conv_act(skips.back(), encoder_[static_cast<std::size_t>(l - 1)]));
    }
    ag::Var h = conv_act(skips.back(), bottleneck_);

    for (int l = D; l >= 1; --l) {
        const auto i = static_cast<std::size_t>(l - 1);
        const ag::Var up = ag::leaky_relu(ag::conv_transpose2d(tape, h, up_[i], trainable), a);
        ag::Var skip = skips[i];
        if (config_.use_waveblock) skip = lwaveblock_forward(tape, blocks_[i], skip, trainable);
        const std::array<ag::Var, 2> parts{up, skip};
        h = conv_act(ag::concat_channels(parts), fuse_[i]);
    }
    return ag::sigmoid(ag::conv2d(tape, h, head_, trainable));
}

Tensor4 Generator::forward(const Tensor4& x) const {
    ag::Tape tape;
    return tape.value(forward(tape, tape.constant(x), false));
}

std::vector<Tensor4*> Generator::parameters() {
    std::vector<Tensor4*> out;
    append(out, stem_);
    for (auto& p : encoder_) append(out, p);
    append(out, bottleneck_);
    for (std::size_t i = up_.size(); i-- > 0;) {
        append(out, up_[i]);
        append(out, fuse_[i]);
    }
    append(out, head_);
    for (auto& b : blocks_) {
        for (Tensor4* t : b.parameters()) out.push_back(t);
    }
    return out;
}

std::vector<const Tensor4*> Generator::parameters() const {
    std::vector<const Tensor4*> out;
    append(out, stem_);
    for (const auto& p : encoder_) append(out, p);
    append(out, bottleneck_);
    for (std::size_t i = up_.size(); i-- > 0;) {
        append(out, up_[i]);
        append(out, fuse_[i]);
    }
    append(out, head_);
    for (const auto& b : blocks_) {
        for (const Tensor4* t : b.parameters()) out.push_back(t);
    }
    return out;
}

std::size_t Generator::parameter_count() const {
    std::size_t n = 0;
    for (const Tensor4* t : parameters()) n += t->numel();
    return n;
}

std::vector<std::uint8_t> Generator::serialize() const {
    const auto& c = config_;
    ByteWriter w;
    w.put_magic("LWG1");
    w.put_u32(kCheckpointVersion);
    w.put_u32(static_cast<std::uint32_t>(c.depth));
    w.put_u32(static_cast<std::uint32_t>(c.base_channels));
    w.put_u32(static_cast<std::uint32_t>(c.in_channels));
    w.put_u32(static_cast<std::uint32_t>(c.out_channels));
    w.put_u32(c.use_waveblock ? 1u : 0u);
    w.put_u32(c.wavelet == wavelet::Family::haar ? 0u : 1u);
    w.put_f64(c.slope);
    w.put_u64(c.seed);
    w.put_u32(static_cast<std::uint32_t>(c.waveblock_channels.size()));
    for (int v : c.waveblock_channels) w.put_u32(static_cast<std::uint32_t>(v));

    std::vector<const Tensor4*> plain;
    append(plain, stem_);
    for (const auto& p : encoder_) append(plain, p);
    append(plain, bottleneck_);
    for (std::size_t i = up_.size(); i-- > 0;) {
        append(plain, up_[i]);
        append(plain, fuse_[i]);
    }
    append(plain, head_);
    std::size_t count = 0;
    for (const Tensor4* t : plain) count += t->numel();
    w.put_u32(static_cast<std::uint32_t>(count));
    for (const Tensor4* t : plain) {
        for (double v : t->data()) w.put_f64(v);
    }

    w.put_u32(static_cast<std::uint32_t>(blocks_.size()));
    for (const auto& b : blocks_) {
        const auto rec = lwave::serialize(b);
        w.put_u32(static_cast<std::uint32_t>(rec.size()));
        w.put_bytes(rec);
    }
    return w.take();
}

Generator Generator::deserialize(std::span<const std::uint8_t> bytes) {
    ByteReader r(bytes);
    r.expect_magic("LWG1");
    if (r.get_u32() != kCheckpointVersion) throw MalformedHeader("LWG1: unsupported version");
    GeneratorConfig c;
    c.depth = static_cast<int>(r.get_u32());
    c.base_channels = static_cast<int>(r.get_u32());
    c.in_channels = static_cast<int>(r.get_u32());
    c.out_channels = static_cast<int>(r.get_u32());
    c.use_waveblock = r.get_u32() != 0;
    const std::uint32_t family = r.get_u32();
    if (family > 1) throw MalformedHeader("LWG1: unknown wavelet id");
    c.wavelet = family == 0 ? wavelet::Family::haar : wavelet::Family::db2;
    c.slope = r.get_f64();
    c.seed = r.get_u64();
    const std::uint32_t nwb = r.get_u32();
    if (nwb > 64) throw MalformedHeader("LWG1: implausible waveblock_channels length");
    c.waveblock_channels.clear();
    for (std::uint32_t i = 0; i < nwb; ++i) c.waveblock_channels.push_back(static_cast<int>(r.get_u32()));

    Generator g = [&] {
        try {
            return Generator(c);
        } catch (const InvalidConfig& e) {
            throw MalformedHeader(std::string("LWG1: ") + e.what());
        }
    }();

    std::vector<Tensor4*> plain;
    append(plain, g.stem_);
    for (auto& p : g.encoder_) append(plain, p);
    append(plain, g.bottleneck_);
    for (std::size_t i = g.up_.size(); i-- > 0;) {
        append(plain, g.up_[i]);
        append(plain, g.fuse_[i]);
    }
    append(plain, g.head_);
    std::size_t expected = 0;
    for (const Tensor4* t : plain) expected += t->numel();
    if (r.get_u32() != expected) throw MalformedHeader("LWG1: value count mismatch");
    for (Tensor4* t : plain) {
        for (double& v : t->data()) v = r.get_f64();
    }

    if (r.get_u32() != g.blocks_.size()) throw MalformedHeader("LWG1: block count mismatch");
    for (auto& b : g.blocks_) {
        const std::uint32_t len = r.get_u32();
        LWaveBlockParams loaded = deserialize_lwaveblock(r.get_bytes(len));
        if (loaded.parameter_count() != b.parameter_count()) {
            throw MalformedHeader("LWG1: embedded block does not match configuration");
        }
        b = std::move(loaded);
    }
    return g;
}

Discriminator::Discriminator(std::uint64_t seed, int in_channels, double slope) : slope_(slope) {
    if (in_channels < 1) throw InvalidConfig("discriminator: in_channels must be >= 1");
    Rng rng(seed);
    layers_.push_back(init_conv(16, static_cast<std::size_t>(in_channels), 4, 2, 1, rng));
    layers_.push_back(init_conv(32, 16, 4, 2, 1, rng));
    layers_.push_back(init_conv(1, 32, 4, 2, 1, rng));
}

ag::Var Discriminator::forward(ag::Tape& tape, ag::Var x, bool trainable) const {
    ag::Var h = x;
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        h = ag::conv2d(tape, h, layers_[i], trainable);
        if (i + 1 < layers_.size()) h = ag::leaky_relu(h, slope_);
    }
    return h;
}

Tensor4 Discriminator::forward(const Tensor4& x) const {
    ag::Tape tape;
    return tape.value(forward(tape, tape.constant(x), false));
}

std::vector<Tensor4*> Discriminator::parameters() {
    std::vector<Tensor4*> out;
    for (auto& p : layers_) append(out, p);
    return out;
}

std::vector<const Tensor4*> Discriminator::parameters() const {
    std::vector<const Tensor4*> out;
    for (const auto& p : layers_) append(out, p);
    return out;
}

Generator build_generator(const GeneratorConfig& config) { return Generator(config); }

Discriminator build_discriminator(std::uint64_t seed) { return Discriminator(seed); }

} // namespace lwave
