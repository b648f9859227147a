// srqed — selective-resonance circuit QED simulator CLI.
//
//   srqed simulate       --config <cfg> --out <csv>
//   srqed sweep          --config <cfg> --out <csv> [--workers N]
//   srqed gate           --config <cfg> [--out <report>] [--refine]
//   srqed find-resonance --config <cfg>

#include "srqed/config.hpp"

#include <CLI11.hpp>

#include <string>

int main(int argc, char** argv) {
    CLI::App app{"Selective-resonance circuit QED simulator"};
    app.require_subcommand(1);

    std::string config_path, out_path;
    int workers = 0;
    bool refine = false;

    auto* simulate = app.add_subcommand("simulate", "Evolve a state and write overlap trajectories");
    simulate->add_option("--config", config_path, "Scenario config file")->required();
    simulate->add_option("--out", out_path, "Output CSV path")->required();

    auto* sweep = app.add_subcommand("sweep", "Run a (g, frequency) MAEV map sweep");
    sweep->add_option("--config", config_path, "Scenario config file")->required();
    sweep->add_option("--out", out_path, "Output CSV path")->required();
    sweep->add_option("--workers", workers, "Worker threads (default: config, then SRQED_WORKERS)");

    auto* gate = app.add_subcommand("gate", "Run a gate protocol and report fidelity");
    gate->add_option("--config", config_path, "Scenario config file")->required();
    gate->add_option("--out", out_path, "Report output path");
    gate->add_flag("--refine", refine, "Refine stage durations for maximum fidelity");

    auto* findres = app.add_subcommand("find-resonance", "Locate a selective resonance frequency");
    findres->add_option("--config", config_path, "Scenario config file")->required();

    CLI11_PARSE(app, argc, argv);

    if (simulate->parsed()) return srqed::cmd_simulate(config_path, out_path);
    if (sweep->parsed()) return srqed::cmd_sweep(config_path, out_path, workers);
    if (gate->parsed()) return srqed::cmd_gate(config_path, out_path, refine);
    if (findres->parsed()) return srqed::cmd_find_resonance(config_path);
    return 1;
}
