// certlab: command-line front end.  Physics parameters come only from the
// configuration file; flags select output locations and worker counts.

#include <CLI11.hpp>

#include <iostream>

#include "nsa/experiment.hpp"

namespace {

int report(const nsa::ExperimentOutcome& out)
{
    if (!out.directory.empty())
        std::cout << "output: " << out.directory.string() << '\n';
    for (const auto& c : out.certificates)
        std::cout << c.theorem << ": " << nsa::to_string(c.verdict) << '\n';
    (out.exit_code == 0 ? std::cout : std::cerr) << out.message << '\n';
    return out.exit_code;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"certlab: spectral experiments for H0 + V on periodic grids"};
    app.require_subcommand(1);

    std::string config_path, theorem, out_dir;
    int workers = 0;

    auto* symbols = app.add_subcommand("symbols", "print symbol values, critical values and sigma(H0)");
    symbols->add_option("config", config_path, "experiment config")->required();

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues with labels as CSV on stdout");
    spectrum->add_option("config", config_path, "experiment config")->required();

    auto* bs = app.add_subcommand("bs", "Schatten norms and determinants along run.ray as CSV on stdout");
    bs->add_option("config", config_path, "experiment config")->required();

    auto* verify = app.add_subcommand("verify", "run one verifier");
    verify->add_option("theorem", theorem, "theorem id")->required();
    verify->add_option("config", config_path, "experiment config")->required();

    auto* scan = app.add_subcommand("scan", "run every theorem in the config");
    scan->add_option("config", config_path, "experiment config")->required();

    for (auto* sub : {verify, scan}) {
        sub->add_option("--out", out_dir, "output root (default $CERTLAB_OUT or ./certlab-out)");
        sub->add_option("--workers", workers, "worker threads (overrides run.workers)")->check(CLI::PositiveNumber);
    }

    CLI11_PARSE(app, argc, argv);

    nsa::ExperimentConfig cfg;
    try {
        cfg = nsa::ExperimentConfig::load(config_path);
    } catch (const nsa::Error& e) {
        std::cerr << e.what() << '\n';
        return 2;
    }
    if (workers > 0)
        cfg.workers = workers;
    const std::filesystem::path root = out_dir.empty() ? nsa::default_output_root() : std::filesystem::path(out_dir);

    try {
        if (symbols->parsed()) {
            nsa::write_symbol_table(std::cout, cfg.spec);
            return 0;
        }
        if (spectrum->parsed()) {
            nsa::write_spectrum_csv(std::cout, nsa::config_spectrum(cfg));
            return 0;
        }
        if (bs->parsed()) {
            nsa::write_bs_scan_csv(std::cout, nsa::bs_scan(cfg));
            return 0;
        }
        if (verify->parsed())
            return report(nsa::run_experiment(cfg, root, {theorem}));
        return report(nsa::run_experiment(cfg, root));
    } catch (const nsa::ConfigError& e) {
        std::cerr << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "compute failure: " << e.what() << '\n';
        return 3;
    }
}
