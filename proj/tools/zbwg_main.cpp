#include "zbwg/config_io.hpp"
#include "zbwg/errors.hpp"
#include "zbwg/version.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfigError = 2;
constexpr int kExitNumericFailure = 3;
constexpr int kExitDiverged = 4;

struct CommonArgs {
    std::string config_path;
    std::string out_prefix;
    std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("-c,--config", args.config_path,
                    "config file (key = value text, or a manifest JSON from an earlier run)");
    cmd->add_option("-D,--set", args.overrides,
                    "override a config key, e.g. -D sigma_r=2.1 (repeatable; wins over the file)");
    cmd->add_option("-o,--out", args.out_prefix, "output path prefix")->required();
}

int workers_from_env() {
    const char* v = std::getenv("ZBWG_WORKERS");
    if (!v || *v == '\0') {
        return 0;
    }
    char* end = nullptr;
    const long parsed = std::strtol(v, &end, 10);
    if (!end || *end != '\0' || parsed < 0) {
        return 0;
    }
    return static_cast<int>(parsed);
}

void report(const zbwg::CommandOutcome& outcome) {
    for (const auto& f : outcome.files) {
        std::cout << "wrote " << f << "\n";
    }
    if (outcome.termination == zbwg::Termination::Diverged) {
        std::cout << "run terminated at the divergence cutoff (partial output written)\n";
    }
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"binary waveguide lattice simulator: coupled-mode propagation, "
                 "Dirac-picture analytics and pseudo-PT phase diagrams"};
    app.set_version_flag("--version", std::string("zbwg ") + zbwg::kToolVersion);
    app.require_subcommand(1);

    CommonArgs simulate_args, analytic_args, compare_args, sweep_args, dispersion_args;
    bool sweep_serial = false;
    int sweep_workers = 0;

    CLI::App* simulate = app.add_subcommand(
        "simulate", "integrate the coupled-mode equations and write the trajectory");
    add_common(simulate, simulate_args);

    CLI::App* analytic = app.add_subcommand(
        "analytic", "evaluate the closed-form position expectation and wavefunction norm");
    add_common(analytic, analytic_args);

    CLI::App* compare = app.add_subcommand(
        "compare", "run simulation and analytic prediction on one config and compare them");
    add_common(compare, compare_args);

    CLI::App* sweep = app.add_subcommand(
        "sweep", "map a 2-parameter phase diagram with boundary and valley extraction");
    add_common(sweep, sweep_args);
    sweep->add_flag("--serial", sweep_serial, "evaluate cells serially (reference path)");
    sweep->add_option("--workers", sweep_workers,
                      "worker threads for cell evaluation (overrides ZBWG_WORKERS)");

    CLI::App* dispersion = app.add_subcommand(
        "dispersion", "tabulate the two-band Bloch dispersion for real and complex mismatch");
    add_common(dispersion, dispersion_args);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e); // --help / --version
        }
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        zbwg::CommandOutcome outcome;
        if (*simulate) {
            outcome = zbwg::cmd_simulate(
                zbwg::load_config(simulate_args.config_path, simulate_args.overrides),
                simulate_args.out_prefix);
        } else if (*analytic) {
            outcome = zbwg::cmd_analytic(
                zbwg::load_config(analytic_args.config_path, analytic_args.overrides),
                analytic_args.out_prefix);
        } else if (*compare) {
            outcome = zbwg::cmd_compare(
                zbwg::load_config(compare_args.config_path, compare_args.overrides),
                compare_args.out_prefix);
        } else if (*sweep) {
            const int workers = sweep->count("--workers") > 0 ? sweep_workers : workers_from_env();
            outcome = zbwg::cmd_sweep(
                zbwg::load_config(sweep_args.config_path, sweep_args.overrides),
                sweep_args.out_prefix,
                sweep_serial ? zbwg::ExecMode::Serial : zbwg::ExecMode::Parallel, workers);
        } else if (*dispersion) {
            outcome = zbwg::cmd_dispersion(
                zbwg::load_config(dispersion_args.config_path, dispersion_args.overrides),
                dispersion_args.out_prefix);
        }
        report(outcome);
        return outcome.termination == zbwg::Termination::Diverged ? kExitDiverged : kExitOk;
    } catch (const zbwg::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumericFailure;
    }
}
