#include "lwave/cli.hpp"
#include "lwave/config.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <string>

namespace {

std::string config_key_help() {
    std::string s = "Config keys (file lines `key = value`, or --set key=value):\n";
    for (const auto& k : lwave::config_keys()) {
        std::string name(k.name);
        name.resize(20, ' ');
        s += "  " + name + std::string(k.description) + " [default: " +
             std::string(k.default_value) + "]\n";
    }
    return s;
}

} // namespace

int main(int argc, char** argv) {
    namespace cli = lwave::cli;
    CLI::App app{"Wavelet decomposition, gradient checks and L-WaveBlock convergence runs"};
    app.require_subcommand(1);

    cli::DecomposeOptions dec;
    auto* decompose = app.add_subcommand("decompose", "Multi-level 2D DWT of a PGM/PPM image");
    decompose->add_option("input", dec.input, "Input P5/P6 image (maxval 255); colour is averaged to grey")
        ->required();
    decompose->add_option("--wavelet", dec.wavelet, "haar | db2")
        ->check(CLI::IsMember({"haar", "db2"}))
        ->capture_default_str();
    decompose->add_option("--levels", dec.levels, "Decomposition depth; image sides must be divisible by 2^levels")
        ->capture_default_str();
    decompose->add_option("--out", dec.out, "Output directory (level<k>/{ll,lh,hl,hh}.pgm, ranges.txt)")
        ->capture_default_str();

    cli::GradcheckOptions gc;
    auto* gradcheck = app.add_subcommand("gradcheck", "Central-difference gradient check of every layer");
    gradcheck->add_option("--seed", gc.seed, "Seed for inputs and sampled coordinates")->capture_default_str();
    // test fixture: proves the checker notices a broken backward pass
    gradcheck->add_flag("--inject-fault", gc.inject_fault)->group("");

    cli::TrainOptions tr;
    std::string config_path;
    auto* train = app.add_subcommand("train", "Baseline vs L-WaveBlock UNet convergence comparison");
    train->add_option("--config", config_path, "Config file; built-in defaults when omitted");
    train->add_option("--set", tr.overrides, "Override one config key (key=value); repeatable");
    train->add_option("--out", tr.out, "Output directory")->capture_default_str();
    train->footer(config_key_help());

    std::string eval_a, eval_b;
    auto* eval = app.add_subcommand("eval", "PSNR (max 255) and mean SSIM between two images");
    eval->add_option("a", eval_a, "First P5/P6 image")->required();
    eval->add_option("b", eval_b, "Second P5/P6 image")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::exit_usage;
    }

    if (*decompose) return cli::cmd_decompose(dec, std::cout, std::cerr);
    if (*gradcheck) return cli::cmd_gradcheck(gc, std::cout, std::cerr);
    if (*train) {
        if (!config_path.empty()) tr.config = config_path;
        return cli::cmd_train(tr, std::cout, std::cerr);
    }
    return cli::cmd_eval(eval_a, eval_b, std::cout, std::cerr);
}
