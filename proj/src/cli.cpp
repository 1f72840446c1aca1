#include "lwave/cli.hpp"

#include "lwave/config.hpp"
#include "lwave/csv.hpp"
#include "lwave/error.hpp"
#include "lwave/gradcheck_suite.hpp"
#include "lwave/metrics.hpp"
#include "lwave/pnm.hpp"
#include "lwave/wavelet.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <ostream>

namespace lwave::cli {
namespace fs = std::filesystem;
namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
    try {
        return fn();
    } catch (const NonFiniteLoss& e) {
        err << "error: " << e.what() << "\n";
        return exit_numeric;
    } catch (const ShapeError& e) {
        err << "error: " << e.what() << "\n";
        return exit_shape;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f << text;
    if (!f) throw Error("write failed: " + path.string());
}

void write_file(const fs::path& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error("cannot write " + path.string());
    f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!f) throw Error("write failed: " + path.string());
}

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Colour input is reduced to its channel mean before decomposition.
Matrix grey_plane(const pnm::ImageU8& img) {
    if (img.channels == 1) return pnm::channel_plane(img, 0);
    Matrix sum(img.height, img.width, 0.0);
    for (std::size_t c = 0; c < img.channels; ++c) {
        const Matrix p = pnm::channel_plane(img, c);
        for (std::size_t i = 0; i < p.data().size(); ++i) sum.data()[i] += p.data()[i];
    }
    for (double& v : sum.data()) v /= static_cast<double>(img.channels);
    return sum;
}

} // namespace

int cmd_decompose(const DecomposeOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        if (opts.levels < 1) throw InvalidConfig("--levels must be >= 1");
        const auto filters = wavelet::filters_for(wavelet::parse_family(opts.wavelet));
        Matrix ll = grey_plane(pnm::read_pnm_file(opts.input));
        const std::size_t step = std::size_t{1} << opts.levels;
        if (ll.rows() % step != 0 || ll.cols() % step != 0) {
            throw InvalidShape("image " + std::to_string(ll.cols()) + "x" +
                               std::to_string(ll.rows()) + " is not divisible by 2^" +
                               std::to_string(opts.levels));
        }

        // decompose everything before touching the output directory
        std::vector<wavelet::SubbandSet> levels;
        for (int k = 0; k < opts.levels; ++k) {
            levels.push_back(wavelet::dwt2d(ll, filters));
            ll = levels.back().ll;
        }

        std::string ranges = "# level band lo hi (pixel = round(255 * (v - lo) / (hi - lo)))\n";
        for (std::size_t k = 0; k < levels.size(); ++k) {
            const fs::path dir = opts.out / ("level" + std::to_string(k + 1));
            fs::create_directories(dir);
            const auto& s = levels[k];
            const std::array<std::pair<const char*, const Matrix*>, 4> bands{
                {{"ll", &s.ll}, {"lh", &s.lh}, {"hl", &s.hl}, {"hh", &s.hh}}};
            for (const auto& [name, m] : bands) {
                const auto [lo, hi] = std::minmax_element(m->data().begin(), m->data().end());
                pnm::write_pnm_file(dir / (std::string(name) + ".pgm"),
                                    pnm::grey_from_plane(*m, *lo, *hi));
                ranges += "level" + std::to_string(k + 1) + " " + name + " " + exact(*lo) + " " +
                          exact(*hi) + "\n";
            }
        }
        write_file(opts.out / "ranges.txt", ranges);
        out << "wrote " << levels.size() << " level(s) of " << opts.wavelet << " subbands to "
            << opts.out.string() << "\n";
        return int{exit_ok};
    });
}

int cmd_gradcheck(const GradcheckOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const auto items = ag::run_gradcheck_suite(
            opts.seed, opts.inject_fault ? ag::Fault::conv_weight_grad : ag::Fault::none);
        bool all = true;
        for (const auto& item : items) {
            char line[160];
            std::snprintf(line, sizeof line, "%-20s max_rel_error=%.3e coords=%zu %s\n",
                          item.name.c_str(), item.result.max_rel_error, item.result.coords_checked,
                          item.passed() ? "PASS" : "FAIL");
            out << line;
            all = all && item.passed();
        }
        char summary[96];
        std::snprintf(summary, sizeof summary, "%zu items, tolerance %.0e: %s\n", items.size(),
                      ag::kGradCheckTolerance, all ? "all passed" : "FAILED");
        out << summary;
        return all ? int{exit_ok} : int{exit_check_failed};
    });
}

int cmd_train(const TrainOptions& opts, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        RunConfig cfg;
        try {
            cfg = opts.config ? load_run_config(opts.config->string()) : RunConfig{};
            apply_overrides(cfg, opts.overrides);
            cfg.validate();
        } catch (const ShapeError& e) {
            // a bad image_size is a configuration problem, not a runtime shape fault
            throw InvalidConfig(e.what());
        }
        const Dataset data = cfg.make_dataset();
        const ComparisonReport report =
            compare_convergence(cfg.generator_config(), cfg.train_config(), data);

        fs::create_directories(opts.out);
        const std::array<LossHistory, 2> histories{report.baseline.result.history,
                                                   report.waveblock.result.history};
        const std::array<std::string, 2> labels{report.baseline.label, report.waveblock.label};
        write_file(opts.out / "losses.csv", csv::write_loss_csv(histories, labels));
        write_file(opts.out / "report.txt", report.to_text());
        write_file(opts.out / "config.txt", cfg.to_text());
        for (const VariantResult* v : {&report.baseline, &report.waveblock}) {
            write_file(opts.out / ("history_" + v->label + ".csv"),
                       csv::write_history_csv(v->result.history));
            write_file(opts.out / (v->label + ".lwg"), v->result.generator.serialize());
        }

        for (const VariantResult* v : {&report.baseline, &report.waveblock}) {
            const auto& h = v->result.history;
            out << v->label << ": loss " << csv::format_double(h.records.front().generator_loss)
                << " -> " << csv::format_double(h.records.back().generator_loss)
                << ", epochs_to_threshold="
                << (h.epochs_to_threshold ? std::to_string(*h.epochs_to_threshold) : "not_reached")
                << "\n";
        }
        out << "wrote " << opts.out.string() << "\n";
        return int{exit_ok};
    });
}

int cmd_eval(const fs::path& a, const fs::path& b, std::ostream& out, std::ostream& err) {
    return guarded(err, [&] {
        const pnm::ImageU8 x = pnm::read_pnm_file(a);
        const pnm::ImageU8 y = pnm::read_pnm_file(b);
        if (x.width != y.width || x.height != y.height || x.channels != y.channels) {
            err << "error: images differ in size or channel count\n";
            return int{exit_usage};
        }
        std::vector<double> xs(x.samples.begin(), x.samples.end());
        std::vector<double> ys(y.samples.begin(), y.samples.end());
        const double p = metrics::psnr(xs, ys, 255.0);
        double s = 0.0;
        for (std::size_t c = 0; c < x.channels; ++c) {
            s += metrics::ssim(pnm::channel_plane(x, c), pnm::channel_plane(y, c), 255.0);
        }
        s /= static_cast<double>(x.channels);
        char line[96];
        std::snprintf(line, sizeof line, "psnr_db=%s ssim=%.6f\n",
                      metrics::format_psnr(p, 4).c_str(), s);
        out << line;
        return int{exit_ok};
    });
}

} // namespace lwave::cli
