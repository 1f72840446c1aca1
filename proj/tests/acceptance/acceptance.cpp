// Acceptance runner: one PASS/FAIL line per criterion, exit 1 if any fails.

#include "oracles.hpp"

#include "lwave/cli.hpp"
#include "lwave/csv.hpp"
#include "lwave/gradcheck_suite.hpp"
#include "lwave/metrics.hpp"
#include "lwave/pnm.hpp"
#include "lwave/waveblock.hpp"
#include "lwave/wavelet.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>

#ifndef LWAVE_SOURCE_DIR
#define LWAVE_SOURCE_DIR "."
#endif

using namespace lwave;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool ok = true;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double energy(const Matrix& m) {
    double e = 0.0;
    for (double v : m.data()) e += v * v;
    return e;
}

double max_abs(const Matrix& m) {
    double r = 0.0;
    for (double v : m.data()) r = std::max(r, std::abs(v));
    return r;
}

const wavelet::Family kFamilies[] = {wavelet::Family::haar, wavelet::Family::db2};
const std::size_t kSizes[] = {8, 16, 32, 64};
constexpr int kImagesPerCase = 50;

// 50 seeded images per (wavelet, size), shared by criteria 1 and 2.
template <typename Fn>
void for_each_corpus_image(Fn&& fn) {
    for (auto fam : kFamilies) {
        const auto f = wavelet::filters_for(fam);
        for (std::size_t n : kSizes) {
            std::mt19937_64 rng(1000 + n + (fam == wavelet::Family::db2 ? 7 : 0));
            for (int i = 0; i < kImagesPerCase; ++i) fn(f, oracle::random_matrix(n, n, rng));
        }
    }
}

Outcome perfect_reconstruction() {
    const auto t0 = Clock::now();
    double worst = 0.0;
    for_each_corpus_image([&](const wavelet::FilterPair& f, const Matrix& x) {
        const Matrix y = wavelet::idwt2d(wavelet::dwt2d(x, f), f);
        for (std::size_t i = 0; i < x.size(); ++i) {
            worst = std::max(worst, std::abs(x.data()[i] - y.data()[i]));
        }
    });
    const double secs = seconds_since(t0);
    return {worst < 1e-10 && secs < 5.0,
            "max error " + fmt("%.2e", worst) + ", " + fmt("%.2f", secs) + " s"};
}

Outcome parseval() {
    double worst = 0.0;
    for_each_corpus_image([&](const wavelet::FilterPair& f, const Matrix& x) {
        const auto s = wavelet::dwt2d(x, f);
        const double ex = energy(x);
        const double es = energy(s.ll) + energy(s.lh) + energy(s.hl) + energy(s.hh);
        worst = std::max(worst, std::abs(es - ex) / ex);
    });
    return {worst < 1e-9, "max relative energy gap " + fmt("%.2e", worst)};
}

Outcome filter_identities() {
    double worst = 0.0;
    for (auto fam : kFamilies) {
        const auto f = wavelet::filters_for(fam);
        double sh = 0, sg = 0, sh2 = 0, qmf = 0;
        const std::size_t L = f.length();
        for (std::size_t k = 0; k < L; ++k) {
            sh += f.low()[k];
            sg += f.high()[k];
            sh2 += f.low()[k] * f.low()[k];
            const double expect = (k % 2 == 0 ? 1.0 : -1.0) * f.low()[L - 1 - k];
            qmf = std::max(qmf, std::abs(f.high()[k] - expect));
        }
        worst = std::max({worst, std::abs(sh - std::sqrt(2.0)), std::abs(sg), std::abs(sh2 - 1.0), qmf});
    }
    return {worst < 1e-12, "max deviation " + fmt("%.2e", worst)};
}

Outcome constant_annihilation() {
    double detail = 0.0, ll = 0.0;
    for (auto fam : kFamilies) {
        const auto f = wavelet::filters_for(fam);
        for (double c : {-3.5, 0.25, 1.0, 42.0}) {
            const Matrix x(16, 16, std::vector<double>(256, c));
            const auto d = wavelet::wavedec2(x, f, 2);
            for (const auto& lvl : d.levels) {
                detail = std::max({detail, max_abs(lvl.lh), max_abs(lvl.hl), max_abs(lvl.hh)});
            }
            const auto one = wavelet::dwt2d(x, f);
            for (double v : one.ll.data()) ll = std::max(ll, std::abs(v - 2.0 * c));
            for (double v : d.final_ll.data()) ll = std::max(ll, std::abs(v - 4.0 * c));
        }
    }
    return {detail < 1e-12 && ll < 1e-12,
            "detail max " + fmt("%.2e", detail) + ", LL deviation " + fmt("%.2e", ll)};
}

Outcome gradient_suite() {
    const auto t0 = Clock::now();
    const auto items = ag::run_gradcheck_suite(0);
    std::set<std::string> seen;
    double worst = 0.0;
    bool ok = true;
    for (const auto& item : items) {
        seen.insert(item.name);
        worst = std::max(worst, item.result.max_rel_error);
        ok = ok && item.passed() && item.result.coords_checked > 0;
    }
    const char* required[] = {"conv2d", "conv_transpose2d", "leaky_relu", "l1_loss", "mse_loss",
                              "bce_with_logits", "lwaveblock"};
    std::string missing;
    for (const char* r : required) {
        if (!seen.count(r)) missing += std::string(" ") + r;
    }
    bool generator = false;
    for (const auto& n : seen) generator = generator || n.rfind("generator", 0) == 0;
    if (!generator) missing += " generator*";

    std::ostringstream out, err;
    const int code = cli::cmd_gradcheck({0, false}, out, err);
    const double secs = seconds_since(t0);
    ok = ok && missing.empty() && code == 0 && secs < 60.0;
    std::string d = std::to_string(items.size()) + " items, max rel error " + fmt("%.2e", worst) +
                    ", cmd_gradcheck exit " + std::to_string(code) + ", " + fmt("%.1f", secs) + " s";
    if (!missing.empty()) d += ", missing:" + missing;
    return {ok, d};
}

Outcome adjoint_identity() {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> pick(0, 1);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        const std::size_t k = 2 + static_cast<std::size_t>(i % 3);
        const int stride = 1 + pick(rng);
        const int pad = pick(rng);
        const std::size_t out_hw = 3 + static_cast<std::size_t>(i % 4);
        const std::size_t in_hw = (out_hw - 1) * static_cast<std::size_t>(stride) + k - 2 * pad;
        const std::size_t cin = 1 + static_cast<std::size_t>(i % 3), cout = 2 + (i % 2);
        const Tensor4 a = oracle::random_tensor({2, cin, in_hw, in_hw}, rng);
        const Tensor4 b = oracle::random_tensor({2, cout, out_hw, out_hw}, rng);
        const Tensor4 w = oracle::random_tensor({cout, cin, k, k}, rng);
        const double lhs = dot(conv2d(a, w, Tensor4({1, cout, 1, 1}), stride, pad), b);
        const double rhs = dot(a, conv_transpose2d(b, w, Tensor4({1, cin, 1, 1}), stride, pad));
        worst = std::max(worst, std::abs(lhs - rhs));
    }
    return {worst < 1e-10, "20 instances, max |lhs - rhs| " + fmt("%.2e", worst)};
}

Outcome waveblock_contract() {
    struct Case {
        LWaveBlockConfig cfg;
        Shape4 input;
    };
    const Case cases[] = {{{1, 8, wavelet::Family::db2, 0.2}, {2, 1, 16, 16}},
                          {{3, 4, wavelet::Family::haar, 0.2}, {1, 3, 8, 12}},
                          {{2, 6, wavelet::Family::db2, 0.1}, {3, 2, 32, 16}}};
    bool shapes = true;
    double detail = 0.0, oracle_gap = 0.0;
    std::mt19937_64 rng(5);
    for (const auto& c : cases) {
        const auto p = lwaveblock_init(c.cfg, 11);
        const Tensor4 x = oracle::random_tensor(c.input, rng);
        const Tensor4 y = lwaveblock_forward(p, x);
        const auto pc = static_cast<std::size_t>(c.cfg.path_channels);
        shapes = shapes && y.shape() == Shape4{c.input.n, 5 * pc, c.input.h, c.input.w};

        // biases start at zero
        const Tensor4 flat = lwaveblock_forward(p, Tensor4(c.input, 0.8));
        for (std::size_t n = 0; n < c.input.n; ++n) {
            for (std::size_t ch = pc; ch < 4 * pc; ++ch) {
                for (double v : flat.plane(n, ch)) detail = std::max(detail, std::abs(v));
            }
        }

        auto q = p;
        std::uniform_real_distribution<double> d(-0.3, 0.3);
        for (Tensor4* t : q.parameters()) {
            for (double& v : t->data()) v = d(rng);
        }
        oracle_gap = std::max(oracle_gap, oracle::max_abs_diff(lwaveblock_forward(q, x),
                                                               oracle::lwaveblock_forward(q, x)));
    }
    return {shapes && detail < 1e-12 && oracle_gap < 1e-10,
            std::string("shapes ") + (shapes ? "ok" : "wrong") + ", detail max " +
                fmt("%.2e", detail) + ", oracle gap " + fmt("%.2e", oracle_gap)};
}

Outcome metrics_and_pnm() {
    std::mt19937_64 rng(8);
    bool exact_one = true;
    for (int i = 0; i < 10; ++i) {
        const Matrix a = oracle::random_matrix(16 + i, 20, rng, 0.0, 255.0);
        exact_one = exact_one && metrics::ssim(a, a, 255.0) == 1.0;
    }
    const Matrix a = oracle::random_matrix(32, 32, rng, 0.0, 200.0);
    Matrix b = a;
    for (double& v : b.data()) v += 16.0;
    const double p = metrics::psnr(a, b, 255.0);
    const bool psnr_ok = std::abs(p - 24.0483) <= 1e-3;

    bool pnm_ok = true;
    for (std::size_t channels : {1u, 3u}) {
        pnm::ImageU8 img{13, 7, channels, {}};
        for (std::size_t i = 0; i < 13 * 7 * channels; ++i) {
            img.samples.push_back(static_cast<std::uint8_t>(rng() & 0xff));
        }
        const auto bytes = pnm::write_pnm(img);
        const auto back = pnm::read_pnm(bytes);
        pnm_ok = pnm_ok && back == img && pnm::write_pnm(back) == bytes;
    }
    return {exact_one && psnr_ok && pnm_ok,
            std::string("ssim(a,a)==1 ") + (exact_one ? "yes" : "no") + ", offset-16 psnr " +
                fmt("%.5f", p) + " dB, pnm round trip " + (pnm_ok ? "exact" : "differs")};
}

std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        files[fs::relative(e.path(), root).generic_string()] = s.str();
    }
    return files;
}

struct TrainRuns {
    fs::path a, b;
    double slowest = 0.0;
    int code_a = -1, code_b = -1;
};

TrainRuns run_default_training(const fs::path& work) {
    TrainRuns r{work / "train_a", work / "train_b"};
    const fs::path cfg = fs::path(LWAVE_SOURCE_DIR) / "configs" / "default.cfg";
    for (auto [dir, code] : {std::pair{r.a, &r.code_a}, std::pair{r.b, &r.code_b}}) {
        fs::remove_all(dir);
        std::ostringstream out, err;
        const auto t0 = Clock::now();
        *code = cli::cmd_train({cfg, {}, dir}, out, err);
        r.slowest = std::max(r.slowest, seconds_since(t0));
        std::istringstream lines(out.str() + err.str());
        for (std::string line; std::getline(lines, line);) std::printf("  %s\n", line.c_str());
        std::fflush(stdout);
    }
    return r;
}

Outcome convergence_harness(const TrainRuns& r) {
    if (r.code_a != 0 || r.code_b != 0) {
        return {false, "cmd_train exit codes " + std::to_string(r.code_a) + ", " +
                           std::to_string(r.code_b)};
    }
    const auto fa = read_tree(r.a);
    const auto fb = read_tree(r.b);
    const bool same_csv = fa.at("losses.csv") == fb.at("losses.csv");
    const auto table = csv::parse(fa.at("losses.csv"));
    bool decreased = table.rows.size() == 200 && table.header.size() == 3;
    std::string losses;
    for (std::size_t col = 1; decreased && col < 3; ++col) {
        const double first = std::stod(table.rows.front()[col]);
        const double last = std::stod(table.rows.back()[col]);
        decreased = decreased && last < first;
        losses += " " + table.header[col] + " " + table.rows.front()[col] + "->" +
                  table.rows.back()[col];
    }
    const std::string& report = fa.at("report.txt");
    std::size_t thresholds = 0;
    for (std::size_t pos = report.find("epochs_to_threshold="); pos != std::string::npos;
         pos = report.find("epochs_to_threshold=", pos + 1)) {
        ++thresholds;
    }
    const bool reported = thresholds == 2 && report.find("[baseline]") != std::string::npos &&
                          report.find("[waveblock]") != std::string::npos;
    return {same_csv && decreased && reported && r.slowest < 600.0,
            "losses" + losses + ", losses.csv " + (same_csv ? "identical" : "differs") +
                ", epochs_to_threshold lines " + std::to_string(thresholds) + ", slowest run " +
                fmt("%.0f", r.slowest) + " s"};
}

Outcome determinism(const fs::path& work, const TrainRuns& r) {
    // a colour test card with sharp edges and a gradient
    pnm::ImageU8 img{64, 32, 3, {}};
    for (std::size_t y = 0; y < 32; ++y) {
        for (std::size_t x = 0; x < 64; ++x) {
            img.samples.push_back(static_cast<std::uint8_t>(4 * x));
            img.samples.push_back(static_cast<std::uint8_t>(((x / 8 + y / 8) % 2) * 255));
            img.samples.push_back(static_cast<std::uint8_t>(8 * y));
        }
    }
    const fs::path input = work / "card.ppm";
    pnm::write_pnm_file(input, img);
    bool decompose_ok = true;
    std::map<std::string, std::string> trees[2];
    for (int i = 0; i < 2; ++i) {
        const fs::path dir = work / ("decompose_" + std::to_string(i));
        fs::remove_all(dir);
        std::ostringstream out, err;
        decompose_ok = decompose_ok && cli::cmd_decompose({input, "db2", 3, dir}, out, err) == 0;
        trees[i] = read_tree(dir);
    }
    const bool decompose_same = decompose_ok && trees[0] == trees[1] && trees[0].size() == 13;

    bool train_same = false;
    std::size_t train_files = 0;
    if (r.code_a == 0 && r.code_b == 0) {
        const auto a = read_tree(r.a);
        train_same = a == read_tree(r.b);
        train_files = a.size();
    }
    return {decompose_same && train_same,
            "decompose " + std::to_string(trees[0].size()) + " files " +
                (decompose_same ? "identical" : "differ") + ", train " +
                std::to_string(train_files) + " files " + (train_same ? "identical" : "differ")};
}

} // namespace

int main() {
    const fs::path work = fs::current_path() / "acceptance_work";
    fs::create_directories(work);

    int failures = 0;
    auto report = [&](int id, const char* name, const std::function<Outcome()>& fn) {
        Outcome o;
        try {
            o = fn();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        std::printf("criterion %2d %-26s %s  (%s)\n", id, name, o.ok ? "PASS" : "FAIL",
                    o.detail.c_str());
        std::fflush(stdout);
        if (!o.ok) ++failures;
    };

    report(1, "perfect reconstruction", perfect_reconstruction);
    report(2, "parseval", parseval);
    report(3, "filter identities", filter_identities);
    report(4, "constant annihilation", constant_annihilation);
    report(5, "gradient suite", gradient_suite);
    report(6, "adjoint identity", adjoint_identity);
    report(7, "waveblock contract", waveblock_contract);
    report(8, "metrics and pnm", metrics_and_pnm);

    std::printf("running the default comparison twice (this takes a few minutes)\n");
    std::fflush(stdout);
    TrainRuns runs;
    try {
        runs = run_default_training(work);
    } catch (const std::exception& e) {
        std::printf("  training aborted: %s\n", e.what());
    }
    report(9, "convergence harness", [&] { return convergence_harness(runs); });
    report(10, "determinism", [&] { return determinism(work, runs); });

    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
