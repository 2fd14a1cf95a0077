#include <chrono>
#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "causetlab/experiments.hpp"
#include "causetlab/parallel.hpp"

namespace {

using causetlab::ExperimentConfig;

// --seed wins; otherwise the CAUSETLAB_SEED environment variable; else 0.
std::uint64_t default_seed() {
    const char* env = std::getenv("CAUSETLAB_SEED");
    if (env == nullptr) return 0;
    try {
        return std::stoull(env);
    } catch (...) {
        throw causetlab::usage_error("CAUSETLAB_SEED is not a valid integer");
    }
}

void add_common(CLI::App* cmd, ExperimentConfig& cfg) {
    cmd->add_option("--dim", cfg.dim, "spacetime dimension d")->capture_default_str();
    cmd->add_option("--seed", cfg.master_seed, "master RNG seed (default: CAUSETLAB_SEED or 0)");
    cmd->add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd->add_option("--threads", cfg.threads, "worker threads")->capture_default_str();
    cmd->add_option("--max-points", cfg.max_points_per_trial,
                    "budget: max expected points per trial")
        ->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"causetlab: Poisson causal sets in Minkowski space - chain heights, "
                 "concentration experiments, and Noldus-distance estimates"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    cfg.threads = causetlab::default_thread_count();

    auto* sample = app.add_subcommand("sample", "draw one Poisson sample of a diamond");
    sample->add_option("--lambda", cfg.lambda_grid, "density")->expected(1);
    sample->add_option("--tau", cfg.tau, "diamond scale <0,tau>")->capture_default_str();
    add_common(sample, cfg);

    auto* estc = app.add_subcommand("estimate-c", "height ensembles over a density grid");
    estc->add_option("--lambda-grid", cfg.lambda_grid, "ascending densities")->expected(-1);
    estc->add_option("--trials", cfg.trials, "trials per density")->capture_default_str();
    estc->add_flag("--plots", cfg.plots, "emit SVG plots");
    estc->add_flag("--svg-timestamp", cfg.svg_timestamp, "add a timestamp comment to SVGs");
    add_common(estc, cfg);

    auto* tail = app.add_subcommand("tail", "deviation tail frequencies vs the bound");
    tail->add_option("--lambda", cfg.lambda_grid, "density")->expected(1);
    tail->add_option("--trials", cfg.trials, "trials")->capture_default_str();
    tail->add_option("--mu", cfg.mu_list, "deviation multipliers")->expected(-1);
    tail->add_flag("--plots", cfg.plots, "emit SVG plots");
    add_common(tail, cfg);

    auto* conv = app.add_subcommand("converge", "Noldus upper-bound exceedance across densities");
    conv->add_option("--lambda-grid", cfg.lambda_grid, "densities")->expected(-1);
    conv->add_option("--eps", cfg.eps_list, "closeness thresholds")->expected(-1);
    conv->add_option("--trials", cfg.trials, "trials per density")->capture_default_str();
    conv->add_option("--probe", cfg.probe, "probe grid resolution per axis")
        ->capture_default_str();
    conv->add_option("--c-d", cfg.c_d, "chain constant (default: the d=2 value)");
    conv->add_option("--tau", cfg.tau, "diamond scale")->capture_default_str();
    conv->add_option("--bound-parse", cfg.bound_parse, "exponent parse, A or B")
        ->check(CLI::IsMember({"A", "B"}))
        ->capture_default_str();
    conv->add_option("--bound-c1", cfg.bound_c1, "bound constant C1")->capture_default_str();
    conv->add_option("--bound-c2", cfg.bound_c2, "bound constant C2")->capture_default_str();
    conv->add_option("--bound-k", cfg.bound_k, "bound constant K")->capture_default_str();
    conv->add_flag("--plots", cfg.plots, "emit SVG plots");
    add_common(conv, cfg);

    auto* nold = app.add_subcommand("noldus", "exact Noldus distance of two matrix files");
    nold->add_option("space1", cfg.space1_path, "first causal-space CSV")->required();
    nold->add_option("space2", cfg.space2_path, "second causal-space CSV")->required();
    nold->add_option("--max-maps", cfg.max_exact_maps, "budget: map enumerations per side")
        ->capture_default_str();
    add_common(nold, cfg);

    auto* lat = app.add_subcommand("lattice-check", "bracket and spacing properties of the "
                                                    "eps-lattice");
    lat->add_option("--eps", cfg.eps_list, "lattice scales")->expected(-1);
    lat->add_option("--probe", cfg.probe, "probe grid resolution per axis")
        ->capture_default_str();
    lat->add_option("--tau", cfg.tau, "diamond scale")->capture_default_str();
    lat->add_option("--max-lattice", cfg.max_lattice_points, "budget: max lattice points")
        ->capture_default_str();
    add_common(lat, cfg);

    try {
        try {
            app.parse(argc, argv);
        } catch (const CLI::ParseError& e) {
            const int code = app.exit(e);
            return code == 0 ? 0 : 1;
        }
        if (sample->count("--seed") + estc->count("--seed") + tail->count("--seed") +
                conv->count("--seed") + nold->count("--seed") + lat->count("--seed") ==
            0)
            cfg.master_seed = default_seed();

        const auto started = std::chrono::steady_clock::now();
        if (app.got_subcommand(sample)) {
            cfg.command = "sample";
            causetlab::run_sample(cfg);
        } else if (app.got_subcommand(estc)) {
            cfg.command = "estimate-c";
            causetlab::run_estimate_c(cfg);
        } else if (app.got_subcommand(tail)) {
            cfg.command = "tail";
            causetlab::run_tail(cfg);
        } else if (app.got_subcommand(conv)) {
            cfg.command = "converge";
            causetlab::run_converge(cfg);
        } else if (app.got_subcommand(nold)) {
            cfg.command = "noldus";
            causetlab::run_noldus(cfg);
        } else if (app.got_subcommand(lat)) {
            cfg.command = "lattice-check";
            causetlab::run_lattice_check(cfg);
        }
        const auto finished = std::chrono::steady_clock::now();
        std::cerr << "done in "
                  << std::chrono::duration<double>(finished - started).count() << "s, outputs in "
                  << cfg.out_dir << "\n";
        return 0;
    } catch (const causetlab::usage_error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 1;
    } catch (const causetlab::budget_error& e) {
        std::cerr << "budget exceeded: " << e.what() << "\n";
        return 2;
    } catch (const causetlab::io_error& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
