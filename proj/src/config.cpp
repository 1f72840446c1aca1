#include "lwave/config.hpp"

#include "lwave/csv.hpp"
#include "lwave/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace lwave {
namespace {

constexpr std::array kKeys{
    ConfigKey{"seed", "42", "generator init, data order and discriminator seed"},
    ConfigKey{"data_seed", "7", "synthetic dataset seed"},
    ConfigKey{"image_size", "32", "square image side; divisible by 2^depth"},
    ConfigKey{"train_count", "16", "training pairs"},
    ConfigKey{"val_count", "4", "held-out pairs for PSNR/SSIM"},
    ConfigKey{"corruption", "gaussian_noise", "gaussian_noise | box_blur"},
    ConfigKey{"noise_sigma", "0.1", "gaussian_noise std-dev on the [0,1] scale"},
    ConfigKey{"blur_kernel", "3", "box_blur odd window side"},
    ConfigKey{"depth", "3", "UNet encoder levels"},
    ConfigKey{"base_channels", "16", "stem width; doubles per level"},
    ConfigKey{"waveblock_channels", "8", "L-WaveBlock path width, one value or one per level"},
    ConfigKey{"wavelet", "db2", "haar | db2"},
    ConfigKey{"slope", "0.2", "LeakyReLU negative slope"},
    ConfigKey{"epochs", "200", "training epochs per variant"},
    ConfigKey{"batch_size", "4", "pairs per optimizer step"},
    ConfigKey{"lr", "0.0002", "Adam learning rate"},
    ConfigKey{"beta1", "0.5", "Adam beta1"},
    ConfigKey{"beta2", "0.999", "Adam beta2"},
    ConfigKey{"loss_mode", "l1_only", "l1_only | adversarial_plus_l1"},
    ConfigKey{"lambda_adv", "0", "adversarial weight (0 in l1_only)"},
    ConfigKey{"lambda_l1", "1", "L1 weight"},
    ConfigKey{"threshold", "0", "loss threshold tau; <= 0 means half the baseline epoch-0 loss"},
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view v) {
    T out{};
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        throw InvalidConfig("config: cannot parse '" + std::string(v) + "' for key '" +
                            std::string(key) + "'");
    }
    return out;
}

std::vector<int> parse_int_list(std::string_view key, std::string_view v) {
    std::vector<int> out;
    while (true) {
        const auto comma = v.find(',');
        out.push_back(parse_number<int>(key, trim(v.substr(0, comma))));
        if (comma == std::string_view::npos) break;
        v = v.substr(comma + 1);
    }
    return out;
}

} // namespace

std::span<const ConfigKey> config_keys() { return kKeys; }

void RunConfig::set(std::string_view key, std::string_view value) {
    const std::string_view v = trim(value);
    if (key == "seed") seed = parse_number<std::uint64_t>(key, v);
    else if (key == "data_seed") data_seed = parse_number<std::uint64_t>(key, v);
    else if (key == "image_size") image_size = parse_number<int>(key, v);
    else if (key == "train_count") train_count = parse_number<int>(key, v);
    else if (key == "val_count") val_count = parse_number<int>(key, v);
    else if (key == "corruption") corruption.kind = data::parse_corruption(v);
    else if (key == "noise_sigma") corruption.sigma = parse_number<double>(key, v);
    else if (key == "blur_kernel") corruption.kernel = parse_number<int>(key, v);
    else if (key == "depth") depth = parse_number<int>(key, v);
    else if (key == "base_channels") base_channels = parse_number<int>(key, v);
    else if (key == "waveblock_channels") waveblock_channels = parse_int_list(key, v);
    else if (key == "wavelet") wavelet = wavelet::parse_family(v);
    else if (key == "slope") slope = parse_number<double>(key, v);
    else if (key == "epochs") epochs = parse_number<int>(key, v);
    else if (key == "batch_size") batch_size = parse_number<int>(key, v);
    else if (key == "lr") lr = parse_number<double>(key, v);
    else if (key == "beta1") beta1 = parse_number<double>(key, v);
    else if (key == "beta2") beta2 = parse_number<double>(key, v);
    else if (key == "loss_mode") loss_mode = parse_loss_mode(v);
    else if (key == "lambda_adv") lambda_adv = parse_number<double>(key, v);
    else if (key == "lambda_l1") lambda_l1 = parse_number<double>(key, v);
    else if (key == "threshold") threshold = parse_number<double>(key, v);
    else throw InvalidConfig("config: unknown key '" + std::string(key) + "'");
}

GeneratorConfig RunConfig::generator_config() const {
    GeneratorConfig g;
    g.depth = depth;
    g.base_channels = base_channels;
    g.waveblock_channels = waveblock_channels;
    g.wavelet = wavelet;
    g.slope = slope;
    g.seed = seed;
    return g;
}

TrainConfig RunConfig::train_config() const {
    TrainConfig t;
    t.epochs = epochs;
    t.batch_size = batch_size;
    t.adam.lr = lr;
    t.adam.beta1 = beta1;
    t.adam.beta2 = beta2;
    t.mode = loss_mode;
    t.lambda_adv = lambda_adv;
    t.lambda_l1 = lambda_l1;
    t.threshold = threshold;
    t.seed = seed;
    return t;
}

void RunConfig::validate() const {
    if (train_count < 1) throw InvalidConfig("config: train_count must be >= 1");
    if (val_count < 0) throw InvalidConfig("config: val_count must be >= 0");
    if (image_size < 8) throw InvalidConfig("config: image_size must be >= 8");
    GeneratorConfig g = generator_config();
    g.use_waveblock = true;
    g.validate();
    if (image_size % (1 << depth) != 0) {
        throw InvalidConfig("config: image_size must be divisible by 2^depth");
    }
    // the L-WaveBlock at the deepest skip sees image_size / 2^(depth-1)
    const int deepest = image_size >> (depth - 1);
    if (deepest < static_cast<int>(wavelet::filters_for(wavelet).length())) {
        throw InvalidConfig("config: image_size too small for the wavelet at the deepest skip");
    }
    train_config().validate();
}

Dataset RunConfig::make_dataset() const {
    validate();
    auto pairs = data::synth_dataset(data_seed, static_cast<std::size_t>(train_count + val_count),
                                     static_cast<std::size_t>(image_size), corruption);
    Dataset ds;
    const auto split = pairs.begin() + train_count;
    ds.train.assign(std::make_move_iterator(pairs.begin()), std::make_move_iterator(split));
    ds.validation.assign(std::make_move_iterator(split), std::make_move_iterator(pairs.end()));
    return ds;
}

std::string RunConfig::to_text() const {
    std::ostringstream os;
    std::string channels;
    for (std::size_t i = 0; i < waveblock_channels.size(); ++i) {
        channels += (i ? "," : "") + std::to_string(waveblock_channels[i]);
    }
    os << "seed = " << seed << "\n"
       << "data_seed = " << data_seed << "\n"
       << "image_size = " << image_size << "\n"
       << "train_count = " << train_count << "\n"
       << "val_count = " << val_count << "\n"
       << "corruption = " << data::to_string(corruption.kind) << "\n"
       << "noise_sigma = " << csv::format_double(corruption.sigma) << "\n"
       << "blur_kernel = " << corruption.kernel << "\n"
       << "depth = " << depth << "\n"
       << "base_channels = " << base_channels << "\n"
       << "waveblock_channels = " << channels << "\n"
       << "wavelet = " << wavelet::to_string(wavelet) << "\n"
       << "slope = " << csv::format_double(slope) << "\n"
       << "epochs = " << epochs << "\n"
       << "batch_size = " << batch_size << "\n"
       << "lr = " << csv::format_double(lr) << "\n"
       << "beta1 = " << csv::format_double(beta1) << "\n"
       << "beta2 = " << csv::format_double(beta2) << "\n"
       << "loss_mode = " << to_string(loss_mode) << "\n"
       << "lambda_adv = " << csv::format_double(lambda_adv) << "\n"
       << "lambda_l1 = " << csv::format_double(lambda_l1) << "\n"
       << "threshold = " << csv::format_double(threshold) << "\n";
    return os.str();
}

RunConfig parse_run_config(std::string_view text) {
    RunConfig cfg;
    std::set<std::string, std::less<>> seen;
    int line_no = 0;
    while (!text.empty()) {
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw InvalidConfig("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const std::string_view key = trim(line.substr(0, eq));
        if (!seen.emplace(key).second) {
            throw InvalidConfig("config line " + std::to_string(line_no) + ": duplicate key '" +
                                std::string(key) + "'");
        }
        cfg.set(key, line.substr(eq + 1));
    }
    return cfg;
}

RunConfig load_run_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_run_config(ss.str());
}

void apply_overrides(RunConfig& cfg, const std::vector<std::string>& overrides) {
    for (const auto& o : overrides) {
        const auto eq = o.find('=');
        if (eq == std::string::npos) {
            throw InvalidConfig("override '" + o + "' is not key=value");
        }
        cfg.set(trim(std::string_view(o).substr(0, eq)), std::string_view(o).substr(eq + 1));
    }
}

} // namespace lwave
