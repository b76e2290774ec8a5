// qst — conclusive spin-chain state transfer experiments.
//
// Subcommands reproduce the standard result set (first-step success curve,
// cumulative success profiles, the N=10 / J=20 K worked example), run
// disorder Monte Carlo sweeps, and cross-validate the reduced engine against
// the brute-force oracle.  Every run writes a CSV data series plus a JSON
// manifest with the resolved configuration.

#include <cstdlib>
#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "qst/experiments.hpp"

namespace {

// TODO: expose SchedulerOptions::refine_rel_tol once someone needs it.
void add_common_flags(CLI::App* cmd, qst::RunConfig& config,
                      bool with_cooling_flag = false) {
    cmd->add_option("--tau-window", config.tau_window,
                    "Per-step search window for tau (0 = 6N/J default)");
    cmd->add_option("--grid", config.grid,
                    "Grid resolution of the tau search (>= 100)");
    cmd->add_option("--out", config.out_dir, "Output directory");
    if (with_cooling_flag)
        cmd->add_flag_callback(
            "--no-cooling", [&config] { config.cooling = false; },
            "Skip the chain reset between transfer and decoding");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Conclusive quantum-state transfer on a single spin chain"};
    app.require_subcommand(1);

    qst::RunConfig config;
    if (const char* env_out = std::getenv("QST_OUT_DIR"))
        config.out_dir = env_out;

    auto* fig2 = app.add_subcommand(
        "fig2", "Maximal first-step success probability eta1 vs chain length");
    fig2->add_option("--n-range", [&config](const CLI::results_t& vals) {
            try {
                config.n_lo = std::stoi(vals.at(0));
                config.n_hi = std::stoi(vals.at(1));
            } catch (const std::exception&) {
                return false;
            }
            return true;
        },
        "Chain-length range (two values: lo hi)")
        ->expected(2);
    add_common_flags(fig2, config);

    auto* fig3 = app.add_subcommand(
        "fig3", "Cumulative success probability vs decode steps");
    fig3->add_option("--n", config.n_list,
                     "Chain lengths (repeatable; default 5 10 20 30)");
    fig3->add_option("--steps", config.steps, "Greedy steps per chain");
    add_common_flags(fig3, config);

    auto* example5 = app.add_subcommand(
        "example5",
        "Full pipeline for one chain: memory budget, timing, physical units");
    example5->add_option("--n", config.n, "Chain length");
    example5->add_option("--eta-target", config.eta_target,
                         "Cumulative success target");
    example5->add_option("--steps", config.steps, "Memory cap");
    example5->add_option("--j-units-kelvin", config.j_kelvin,
                         "Coupling in kelvin (default 20)");
    add_common_flags(example5, config, true);

    auto* sweep = app.add_subcommand(
        "sweep", "Disorder Monte Carlo over randomly coupled chains");
    sweep->add_option("--n", config.n, "Chain length");
    sweep->add_option("--delta", config.delta, "Relative coupling spread");
    sweep->add_option("--seeds", config.seeds, "Number of disorder samples");
    sweep->add_option("--seed", config.seed, "Master seed");
    sweep->add_option("--eta-target", config.eta_target,
                      "Cumulative success target");
    sweep->add_option("--steps", config.steps, "Memory cap");
    sweep->add_option("--j-units-kelvin", config.j_kelvin,
                      "Coupling in kelvin (0 = natural units)");
    add_common_flags(sweep, config, true);

    auto* verify = app.add_subcommand(
        "verify", "Oracle equivalence and invariant cross-checks");
    verify->add_option("--seed", config.seed, "Master seed");
    verify->add_option("--out", config.out_dir, "Output directory");

    CLI11_PARSE(app, argc, argv);

    config.command = app.get_subcommands().front()->get_name();

    try {
        return qst::run_command(config);
    } catch (const std::exception& e) {
        std::cerr << "qst: error: " << e.what() << '\n';
        return 2;
    }
}
