#include <cstdlib>
#include <iostream>

#include <CLI11.hpp>

#include "bsdelab/errors.hpp"
#include "bsdelab/experiments.hpp"

namespace {

constexpr int kExitVerdictFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericalFailure = 3;

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"bsde-lab: configuration-driven experiments on backward SDE solvers, "
                 "nonlinear expectations and driver representation probes"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "bsde-lab-out";
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;
    double tolerance_scale = 1.0;

    auto* run = app.add_subcommand("run", "run the experiment described by a config file");
    run->add_option("config", config_path, "path to the config file")->required();
    run->add_option("--seed", seed, "override paths.seed")->each([&](const std::string&) {
        seed_set = true;
    });
    run->add_option("--out-dir", out_dir, "output directory (BSDE_LAB_OUT overrides)");
    run->add_option("--jobs", jobs, "worker threads for path-parallel stages");
    run->add_option("--tolerance-scale", tolerance_scale, "multiplies verdict tolerances");

    auto* list = app.add_subcommand("list", "list builtin generators, models and terminals");

    CLI11_PARSE(app, argc, argv);

    if (list->parsed()) {
        std::cout << bsdelab::catalog_listing();
        return 0;
    }

    try {
        const auto cfg = bsdelab::Config::parse_file(config_path);
        bsdelab::RunOverrides ov;
        if (seed_set) ov.seed = seed;
        if (const char* env = std::getenv("BSDE_LAB_OUT"))
            ov.out_dir = env;
        else
            ov.out_dir = out_dir;
        ov.jobs = jobs;
        ov.tolerance_scale = tolerance_scale;

        const auto outcome = bsdelab::run_experiment(cfg, ov);
        for (const auto& v : outcome.verdicts.items)
            std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << v.id
                      << (v.detail.empty() ? "" : ": " + v.detail) << "\n";
        for (const auto& f : outcome.files_written) std::cout << "wrote " << f << "\n";
        return outcome.all_pass() ? 0 : kExitVerdictFailure;
    } catch (const bsdelab::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    } catch (const bsdelab::NumericalFailure& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return kExitNumericalFailure;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitNumericalFailure;
    }
}
