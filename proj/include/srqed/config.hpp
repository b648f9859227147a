// config.hpp — Scenario configuration files (strict JSON schema, unknown keys
// rejected, unit-bearing key names) and the command runners behind the CLI
// subcommands. Exit codes: 0 success, 2 config error, 3 numerical error,
// 4 protocol-constraint error.

#pragma once

#include "srqed/gates.hpp"
#include "srqed/hamiltonian.hpp"
#include "srqed/sweep.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace srqed {

struct config_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One overlap curve |<target|psi(t)>|^2. Curves may start from different
// initial states; they share the time grid and the Hamiltonian.
struct TrajectoryCurve {
    std::string name;
    BasisLabel initial;
    BasisLabel target;
};

struct TrajectorySection {
    std::vector<TrajectoryCurve> curves;
    double dt_ns{0.01};
    double t_max_ns{0.0};

    std::vector<double> times() const;
};

struct GateSection {
    GateKind kind{GateKind::CPhase};
    bool refine{false};
    CPhaseParams cphase;
    CCPhaseParams ccphase;
    FredkinParams fredkin;
};

struct FindResonanceSection {
    int qubit{0};
    ScanRange scan;
    OscillationSpec osc;
};

struct ScenarioConfig {
    std::optional<SystemSpec> system;
    std::optional<TrajectorySection> trajectory;
    std::optional<SweepGrid> sweep;
    std::optional<GateSection> gate;
    std::optional<FindResonanceSection> find_resonance;
    int workers{0};  // 0 = unspecified
};

// Parses and validates; throws config_error with a field/line diagnostic.
ScenarioConfig load_config(const std::string& path);

// Worker-count resolution: CLI flag, then config, then SRQED_WORKERS, then 1.
int resolve_workers(int cli_workers, const ScenarioConfig& config);

// Command runners. Each catches errors, prints a diagnostic to stderr, and
// returns the exit code.
int cmd_simulate(const std::string& config_path, const std::string& out_path);
int cmd_sweep(const std::string& config_path, const std::string& out_path, int cli_workers);
int cmd_gate(const std::string& config_path, const std::string& out_path, bool refine_flag);
int cmd_find_resonance(const std::string& config_path);

}  // namespace srqed
