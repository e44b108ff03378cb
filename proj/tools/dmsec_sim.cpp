// dmsec-sim: runs the BER, secrecy-rate, robustness and complexity
// experiments and writes CSV.
//
//   dmsec-sim ber-angle  --config cfg.json --out ber.csv --seed 7 --threads 4
//   dmsec-sim ssr-snr    --config cfg.json --out ssr.csv
//   dmsec-sim robust-ber --config cfg.json --out robust.csv
//   dmsec-sim flops      --config cfg.json --out flops.csv
//
// Without --config the built-in reference configuration is used. Exit code 2
// signals a configuration error.

#include <cstdint>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmsec/experiment.hpp"
#include "dmsec/kernels/kernels.hpp"

namespace {

constexpr int kConfigErrorExit = 2;

struct CommonArgs {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config, "JSON experiment configuration (default: built-in reference setup)");
    cmd->add_option("--out", args.out, "Output CSV path (default: stdout)");
    cmd->add_option("--seed", args.seed, "Master seed, overrides the config");
    cmd->add_option("--threads", args.threads, "Worker threads")->check(CLI::PositiveNumber);
}

using Runner = std::function<void(const dmsec::ExperimentConfig&, std::ostream&, const dmsec::RunOptions&)>;

int execute(const CommonArgs& args, const Runner& run) {
    dmsec::ExperimentConfig cfg;
    try {
        cfg = args.config.empty() ? dmsec::ExperimentConfig::reference_defaults()
                                  : dmsec::ExperimentConfig::load(args.config);
        if (args.seed) cfg.seed = *args.seed;
        cfg.validate();
    } catch (const dmsec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigErrorExit;
    } catch (const dmsec::DomainError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigErrorExit;
    }

    const dmsec::RunOptions opt{args.threads};
    try {
        if (args.out.empty()) {
            run(cfg, std::cout, opt);
            return 0;
        }
        // Written to a temporary first so a failed run leaves no partial CSV.
        const std::string tmp = args.out + ".part";
        {
            std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
            if (!file) {
                std::cerr << "cannot write " << tmp << '\n';
                return 1;
            }
            run(cfg, file, opt);
        }
        if (std::rename(tmp.c_str(), args.out.c_str()) != 0) {
            std::cerr << "cannot move " << tmp << " to " << args.out << '\n';
            return 1;
        }
    } catch (const dmsec::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigErrorExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secure multicast directional-modulation simulator"};
    app.require_subcommand(1);
    bool show_isa = false;
    app.add_flag("--show-isa", show_isa, "Print the selected kernel variant to stderr");

    CommonArgs ber_args, ssr_args, robust_args, flops_args;
    CLI::App* ber = app.add_subcommand("ber-angle", "BER of each group versus probe direction");
    CLI::App* ssr = app.add_subcommand("ssr-snr", "Secrecy sum-rate per group versus SNR");
    CLI::App* robust = app.add_subcommand("robust-ber", "BER versus direction under angle-measurement errors");
    CLI::App* fl = app.add_subcommand("flops", "FLOP-count model over a size sweep");
    add_common(ber, ber_args);
    add_common(ssr, ssr_args);
    add_common(robust, robust_args);
    add_common(fl, flops_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfigErrorExit;
    }

    if (show_isa) std::cerr << "kernels: " << dmsec::kernels::active_kernels().name << '\n';

    if (ber->parsed()) return execute(ber_args, dmsec::run_ber_angle);
    if (ssr->parsed()) return execute(ssr_args, dmsec::run_ssr_snr);
    if (robust->parsed()) return execute(robust_args, dmsec::run_robust_ber);
    return execute(flops_args, dmsec::run_flops);
}
