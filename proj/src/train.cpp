#include "lwave/train.hpp"

#include "lwave/csv.hpp"
#include "lwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace lwave {
namespace {

Tensor4 stack(const std::vector<data::ImagePair>& pairs, std::span<const std::size_t> idx,
              bool corrupted) {
    const Matrix& first = corrupted ? pairs[idx[0]].corrupted : pairs[idx[0]].clean;
    Tensor4 out({idx.size(), 1, first.rows(), first.cols()});
    for (std::size_t b = 0; b < idx.size(); ++b) {
        const Matrix& m = corrupted ? pairs[idx[b]].corrupted : pairs[idx[b]].clean;
        if (!m.same_shape(first)) throw ShapeError("train: images in a batch differ in size");
        std::copy(m.data().begin(), m.data().end(), out.plane(b, 0).begin());
    }
    return out;
}

std::vector<Tensor4> collect_grads(ag::Tape& tape, const std::vector<Tensor4*>& params) {
    std::vector<Tensor4> grads;
    grads.reserve(params.size());
    for (Tensor4* p : params) {
        const Tensor4* g = tape.param_grad(*p);
        grads.push_back(g != nullptr ? *g : Tensor4(p->shape()));
    }
    return grads;
}

metrics::MetricReport evaluate_split(const Generator& gen,
                                     const std::vector<data::ImagePair>& pairs) {
    if (pairs.empty()) return {0.0, 0.0};
    double psnr_sum = 0.0;
    double ssim_sum = 0.0;
    for (const auto& p : pairs) {
        const Tensor4 x({1, 1, p.corrupted.rows(), p.corrupted.cols()}, p.corrupted.data());
        const Tensor4 y = gen.forward(x);
        const Matrix pred(p.clean.rows(), p.clean.cols(), y.data());
        psnr_sum += metrics::psnr(pred, p.clean, 1.0);
        ssim_sum += metrics::ssim(pred, p.clean, 1.0);
    }
    const auto n = static_cast<double>(pairs.size());
    return {psnr_sum / n, ssim_sum / n};
}

void check_finite(double v, int epoch, const char* what) {
    if (!std::isfinite(v)) {
        throw NonFiniteLoss(epoch, std::string(what) + " became non-finite at epoch " +
                                       std::to_string(epoch));
    }
}

std::string loss_label(const TrainConfig& c) {
    std::ostringstream os;
    if (c.mode == LossMode::l1_only) {
        os << "generator objective = " << c.lambda_l1 << " * L1";
    } else {
        os << "generator objective = " << c.lambda_adv << " * BCE(D(G(x)), 1) + " << c.lambda_l1
           << " * L1";
    }
    return os.str();
}

} // namespace

LossMode parse_loss_mode(std::string_view name) {
    if (name == "l1_only") return LossMode::l1_only;
    if (name == "adversarial_plus_l1") return LossMode::adversarial_plus_l1;
    throw InvalidConfig("unknown loss mode '" + std::string(name) +
                        "' (expected l1_only or adversarial_plus_l1)");
}

std::string_view to_string(LossMode mode) noexcept {
    return mode == LossMode::l1_only ? "l1_only" : "adversarial_plus_l1";
}

TrainConfig TrainConfig::adversarial() {
    TrainConfig c;
    c.mode = LossMode::adversarial_plus_l1;
    c.lambda_adv = 1.0;
    c.lambda_l1 = 100.0;
    return c;
}

void TrainConfig::validate() const {
    if (epochs < 1) throw InvalidConfig("train: epochs must be >= 1");
    if (batch_size < 1) throw InvalidConfig("train: batch_size must be >= 1");
    if (!(adam.lr >= 0.0)) throw InvalidConfig("train: learning rate must be >= 0");
    if (!(lambda_adv >= 0.0) || !(lambda_l1 >= 0.0)) {
        throw InvalidConfig("train: loss weights must be >= 0");
    }
    if (mode == LossMode::l1_only && lambda_adv != 0.0) {
        throw InvalidConfig("train: lambda_adv must be 0 in l1_only mode");
    }
}

TrainResult train_model(const GeneratorConfig& gen_config, const TrainConfig& cfg,
                        const Dataset& dataset) {
    cfg.validate();
    if (dataset.train.empty()) throw InvalidConfig("train: empty training set");

    TrainResult out{LossHistory{}, Generator(gen_config)};
    Generator& gen = out.generator;
    const bool adversarial = cfg.mode == LossMode::adversarial_plus_l1;
    Discriminator disc(cfg.seed ^ 0x9E3779B97F4A7C15ull);

    std::vector<Tensor4*> gparams = gen.parameters();
    std::vector<Tensor4*> dparams = disc.parameters();
    AdamState gstate, dstate;
    std::mt19937_64 order_rng(cfg.seed);
    std::vector<std::size_t> order(dataset.train.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const auto batch = static_cast<std::size_t>(cfg.batch_size);

    out.history.loss_label = loss_label(cfg);
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), order_rng);
        double gsum = 0.0, dsum = 0.0;
        int steps = 0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::span<const std::size_t> idx(order.data() + start,
                                                   std::min(batch, order.size() - start));
            const Tensor4 x = stack(dataset.train, idx, true);
            const Tensor4 y = stack(dataset.train, idx, false);

            ag::Tape gtape;
            const ag::Var fake = gen.forward(gtape, gtape.constant(x), true);
            const ag::Var target = gtape.constant(y);
            ag::Var gloss = ag::scale(ag::l1_loss(fake, target), cfg.lambda_l1);

            if (adversarial) {
                ag::Tape dtape;
                const ag::Var real_logits = disc.forward(dtape, dtape.constant(y), true);
                const ag::Var fake_logits =
                    disc.forward(dtape, dtape.constant(gtape.value(fake)), true);
                const Shape4 ls = dtape.value(real_logits).shape();
                const ag::Var ones = dtape.constant(Tensor4(ls, 1.0));
                const ag::Var zeros = dtape.constant(Tensor4(ls, 0.0));
                const ag::Var dloss = ag::scale(ag::add(ag::bce_with_logits(real_logits, ones),
                                                        ag::bce_with_logits(fake_logits, zeros)),
                                                0.5);
                const double dval = dtape.value(dloss).item();
                check_finite(dval, epoch, "discriminator loss");
                dtape.backward(dloss);
                adam_step(dparams, dstate, collect_grads(dtape, dparams), cfg.adam);
                dsum += dval;

                // generator sees the freshly updated discriminator
                const ag::Var logits = disc.forward(gtape, fake, false);
                const ag::Var real_labels =
                    gtape.constant(Tensor4(gtape.value(logits).shape(), 1.0));
                gloss = ag::add(gloss, ag::scale(ag::bce_with_logits(logits, real_labels),
                                                 cfg.lambda_adv));
            }

            const double gval = gtape.value(gloss).item();
            check_finite(gval, epoch, "generator loss");
            gtape.backward(gloss);
            adam_step(gparams, gstate, collect_grads(gtape, gparams), cfg.adam);
            gsum += gval;
            ++steps;
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.generator_loss = gsum / steps;
        if (adversarial) rec.discriminator_loss = dsum / steps;
        const auto val = evaluate_split(gen, dataset.validation);
        rec.val_psnr_db = val.psnr_db;
        rec.val_ssim = val.ssim;
        out.history.records.push_back(rec);
    }

    out.history.threshold = cfg.threshold > 0.0 ? cfg.threshold
                                                : 0.5 * out.history.records.front().generator_loss;
    out.history.update_threshold_epoch();
    return out;
}

LossHistory train(const GeneratorConfig& gen_config, const TrainConfig& train_config,
                  const Dataset& dataset) {
    return train_model(gen_config, train_config, dataset).history;
}

ComparisonReport compare_convergence(const GeneratorConfig& gen_config_base,
                                     const TrainConfig& train_config, const Dataset& dataset) {
    GeneratorConfig base_cfg = gen_config_base;
    base_cfg.use_waveblock = false;
    GeneratorConfig block_cfg = gen_config_base;
    block_cfg.use_waveblock = true;

    auto run = [&](const GeneratorConfig& gc, std::string label) {
        VariantResult v{std::move(label), train_model(gc, train_config, dataset), 0, {}};
        v.parameter_count = v.result.generator.parameter_count();
        v.final_metrics = evaluate_split(v.result.generator, dataset.validation);
        return v;
    };

    ComparisonReport report{0.0, run(base_cfg, "baseline"), run(block_cfg, "waveblock")};
    report.threshold = train_config.threshold > 0.0
                           ? train_config.threshold
                           : 0.5 * report.baseline.result.history.records.front().generator_loss;
    for (VariantResult* v : {&report.baseline, &report.waveblock}) {
        v->result.history.threshold = report.threshold;
        v->result.history.update_threshold_epoch();
    }
    return report;
}

std::string ComparisonReport::to_text() const {
    std::ostringstream os;
    os << "# L-WaveBlock convergence comparison (desk scale)\n"
       << "# Reference context from full-scale published experiments; NOT reproduced or\n"
       << "# asserted by this harness:\n"
       << "#   maps (generation):      with block IS 3.6959, SSIM 0.4261\n"
       << "#   CelebA (super-res):     with block PSNR 29.05 dB, SSIM 0.874\n"
       << "#   GoPro (deblurring):     with block PSNR 26.913 dB, SSIM 0.782\n"
       << "#   convergence:            ~750 epochs with block vs ~1000 for competing models\n"
       << "# PSNR/SSIM below use max_val = 1.0 on the held-out split.\n";
    os << "threshold=" << csv::format_double(threshold) << "\n";
    for (const VariantResult* v : {&baseline, &waveblock}) {
        const auto& h = v->result.history;
        os << "\n[" << v->label << "]\n"
           << "loss_label=" << h.loss_label << "\n"
           << "parameters=" << v->parameter_count << "\n"
           << "epochs=" << h.records.size() << "\n"
           << "initial_loss=" << csv::format_double(h.records.front().generator_loss) << "\n"
           << "final_loss=" << csv::format_double(h.records.back().generator_loss) << "\n"
           << "epochs_to_threshold="
           << (h.epochs_to_threshold ? std::to_string(*h.epochs_to_threshold) : "not_reached")
           << "\n"
           << "final_psnr_db=" << metrics::format_psnr(v->final_metrics.psnr_db, 6) << "\n"
           << "final_ssim=" << csv::format_double(v->final_metrics.ssim) << "\n";
    }
    return os.str();
}

} // namespace lwave
