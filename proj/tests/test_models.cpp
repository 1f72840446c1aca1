#include "oracles.hpp"

#include "lwave/error.hpp"
#include "lwave/models.hpp"
#include "lwave/train.hpp"

#include <doctest.h>

#include <limits>

using namespace lwave;

namespace {

GeneratorConfig small_generator(bool waveblock) {
    GeneratorConfig c;
    c.depth = 2;
    c.base_channels = 4;
    c.use_waveblock = waveblock;
    c.waveblock_channels = {2};
    c.seed = 3;
    return c;
}

Dataset small_dataset(std::size_t train, std::size_t val, std::size_t size) {
    const auto all = data::synth_dataset(21, train + val, size, {});
    Dataset d;
    d.train.assign(all.begin(), all.begin() + static_cast<long>(train));
    d.validation.assign(all.begin() + static_cast<long>(train), all.end());
    return d;
}

TrainConfig quick_train(int epochs) {
    TrainConfig t;
    t.epochs = epochs;
    t.batch_size = 2;
    t.seed = 5;
    return t;
}

} // namespace

TEST_CASE("generator output shape and range") {
    std::mt19937_64 rng(1);
    const Tensor4 x = oracle::random_tensor({2, 1, 16, 16}, rng, 0.0, 1.0);
    for (bool wb : {false, true}) {
        const Generator g(small_generator(wb));
        const Tensor4 y = g.forward(x);
        CHECK(y.shape() == Shape4{2, 1, 16, 16});
        for (double v : y.data()) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("waveblock variant changes the parameter count") {
    const Generator plain(small_generator(false));
    const Generator block(small_generator(true));
    CHECK(plain.blocks().empty());
    CHECK(block.blocks().size() == 2);
    CHECK(block.parameter_count() != plain.parameter_count());
    std::size_t n = 0;
    for (const Tensor4* t : plain.parameters()) n += t->numel();
    CHECK(n == plain.parameter_count());
}

TEST_CASE("generator construction is deterministic") {
    const Generator a(small_generator(true));
    const Generator b(small_generator(true));
    CHECK(a.serialize() == b.serialize());
    auto other = small_generator(true);
    other.seed = 4;
    CHECK(Generator(other).serialize() != a.serialize());
}

TEST_CASE("generator input and config validation") {
    const Generator g(small_generator(false));
    CHECK_THROWS_AS(g.forward(Tensor4({1, 2, 16, 16})), ShapeError);
    CHECK_THROWS_AS(g.forward(Tensor4({1, 1, 14, 16})), ShapeError);
    auto c = small_generator(true);
    c.waveblock_channels = {2, 2, 2};
    CHECK_THROWS_AS(Generator{c}, InvalidConfig);
    c = small_generator(false);
    c.depth = 0;
    CHECK_THROWS_AS(Generator{c}, InvalidConfig);
}

TEST_CASE("discriminator emits a patch logit map") {
    const Discriminator d(7);
    std::mt19937_64 rng(2);
    const Tensor4 y = d.forward(oracle::random_tensor({3, 1, 32, 32}, rng, 0.0, 1.0));
    CHECK(y.shape() == Shape4{3, 1, 4, 4});
    CHECK(y.all_finite());
}

TEST_CASE("LWG1 round trip") {
    std::mt19937_64 rng(3);
    for (bool wb : {false, true}) {
        Generator g(small_generator(wb));
        std::uniform_real_distribution<double> d(-0.1, 0.1);
        for (Tensor4* t : g.parameters()) {
            for (double& v : t->data()) v += d(rng);
        }
        const auto bytes = g.serialize();
        const Generator h = Generator::deserialize(bytes);
        CHECK(h.serialize() == bytes);
        CHECK(h.config().use_waveblock == wb);
        const Tensor4 x = oracle::random_tensor({1, 1, 16, 16}, rng, 0.0, 1.0);
        CHECK(h.forward(x) == g.forward(x));

        auto bad = bytes;
        bad[3] = '2';
        CHECK_THROWS_AS(Generator::deserialize(bad), FormatError);
        CHECK_THROWS_AS(Generator::deserialize(std::span(bytes).first(bytes.size() / 2)),
                        FormatError);
    }
}

TEST_CASE("one epoch yields one record") {
    const auto h = train(small_generator(false), quick_train(1), small_dataset(4, 2, 16));
    REQUIRE(h.records.size() == 1);
    CHECK(h.records[0].epoch == 0);
    CHECK(std::isfinite(h.records[0].generator_loss));
    CHECK_FALSE(h.records[0].discriminator_loss.has_value());
    CHECK(h.threshold == doctest::Approx(0.5 * h.records[0].generator_loss));
    CHECK_FALSE(h.epochs_to_threshold.has_value());
}

TEST_CASE("training is deterministic") {
    const Dataset d = small_dataset(4, 2, 16);
    for (bool wb : {false, true}) {
        const auto a = train_model(small_generator(wb), quick_train(3), d);
        const auto b = train_model(small_generator(wb), quick_train(3), d);
        REQUIRE(a.history.records.size() == 3);
        for (std::size_t i = 0; i < 3; ++i) {
            CHECK(a.history.records[i].generator_loss == b.history.records[i].generator_loss);
            CHECK(a.history.records[i].val_ssim == b.history.records[i].val_ssim);
        }
        CHECK(a.generator.serialize() == b.generator.serialize());
    }
}

TEST_CASE("non-finite loss aborts training") {
    Dataset d = small_dataset(2, 0, 16);
    d.train[1].corrupted(3, 3) = std::numeric_limits<double>::quiet_NaN();
    try {
        train(small_generator(false), quick_train(2), d);
        FAIL("expected NonFiniteLoss");
    } catch (const NonFiniteLoss& e) {
        CHECK(e.epoch() == 0);
    }
}

TEST_CASE("train config validation") {
    const Dataset d = small_dataset(2, 0, 16);
    TrainConfig t = quick_train(0);
    CHECK_THROWS_AS(train(small_generator(false), t, d), InvalidConfig);
    t = quick_train(1);
    t.lambda_adv = 1.0;
    CHECK_THROWS_AS(train(small_generator(false), t, d), InvalidConfig);
    CHECK_THROWS_AS(train(small_generator(false), quick_train(1), Dataset{}), InvalidConfig);
    CHECK_THROWS_AS(parse_loss_mode("gan"), InvalidConfig);
}

TEST_CASE("adversarial mode records both losses") {
    const TrainConfig base = TrainConfig::adversarial();
    CHECK(base.lambda_l1 == 100.0);
    CHECK(base.lambda_adv == 1.0);
    TrainConfig t = base;
    t.epochs = 5;
    t.batch_size = 2;
    const auto h = train(small_generator(true), t, small_dataset(4, 2, 16));
    REQUIRE(h.records.size() == 5);
    for (const auto& r : h.records) {
        CHECK(std::isfinite(r.generator_loss));
        REQUIRE(r.discriminator_loss.has_value());
        CHECK(std::isfinite(*r.discriminator_loss));
    }
}

TEST_CASE("identity task loss does not increase") {
    Dataset d = small_dataset(4, 0, 8);
    for (auto& p : d.train) p.corrupted = p.clean;
    GeneratorConfig g = small_generator(false);
    g.depth = 1;
    TrainConfig t = quick_train(200);
    t.adam.lr = 1e-3;
    const auto h = train(g, t, d);
    CHECK(h.records.back().generator_loss <= h.records.front().generator_loss);
}

TEST_CASE("comparison shares one threshold") {
    const Dataset d = small_dataset(4, 2, 16);
    const auto r = compare_convergence(small_generator(false), quick_train(4), d);
    CHECK(r.baseline.label == "baseline");
    CHECK(r.waveblock.label == "waveblock");
    CHECK(r.threshold == 0.5 * r.baseline.result.history.records.front().generator_loss);
    CHECK(r.baseline.result.history.threshold == r.threshold);
    CHECK(r.waveblock.result.history.threshold == r.threshold);
    CHECK(r.baseline.parameter_count != r.waveblock.parameter_count);
    CHECK(r.waveblock.result.generator.config().use_waveblock);
    const std::string text = r.to_text();
    CHECK(text.find("[baseline]") != std::string::npos);
    CHECK(text.find("[waveblock]") != std::string::npos);
    CHECK(text.find("epochs_to_threshold=") != std::string::npos);

    TrainConfig fixed = quick_train(2);
    fixed.threshold = 1e9;
    const auto f = compare_convergence(small_generator(false), fixed, d);
    CHECK(f.threshold == 1e9);
    CHECK(f.baseline.result.history.epochs_to_threshold == 0);
    CHECK(f.waveblock.result.history.epochs_to_threshold == 0);
}
