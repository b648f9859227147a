// sweep.hpp — Parallel 2-D parameter sweeps over (coupling, frequency)
// producing maps of the maximal transition-probability value (MAEV) for a
// wanted and an unwanted oscillation, with checkpointed CSV output.

#pragma once

#include "srqed/dynamics.hpp"
#include "srqed/hamiltonian.hpp"

#include <string>
#include <vector>

namespace srqed {

struct OscillationSpec {
    BasisLabel initial;
    BasisLabel target;
};

struct SweepGrid {
    std::vector<double> g_values_ghz;     // strictly increasing
    std::vector<double> freq_values_ghz;  // strictly increasing
    SystemSpec base_spec;
    int swept_qubit{1};     // mode whose 0<->1 frequency is swept
    int swept_coupling{1};  // coupling whose g values are swept (all transitions)
    OscillationSpec rot0;   // wanted oscillation
    OscillationSpec rot1;   // unwanted oscillation
    double dt_ns{0.01};

    void validate() const;
};

struct CellResult {
    MaevResult rot0;
    MaevResult rot1;
};

struct MaevMap {
    SweepGrid grid;
    std::vector<CellResult> cells;  // row-major, g outer

    const CellResult& at(std::size_t g_index, std::size_t f_index) const {
        return cells[g_index * grid.freq_values_ghz.size() + f_index];
    }
};

// Evaluates every (g, freq) cell: retunes the swept qubit, rescales the swept
// coupling, and records maev for both oscillations over a window of 1.25x the
// resonant period 1/(2g). Deterministic and independent of worker count; any
// cell failure aborts with the cell coordinates.
MaevMap run_sweep(const SweepGrid& grid, int workers);

// Header g2_ghz,freq_ghz,rot0_maev,rot0_t_ns,rot1_maev,rot1_t_ns; one row per
// cell, row-major (g outer), 9 significant digits, LF line endings.
void write_csv(const MaevMap& map, const std::string& path);

// run_sweep with row-level checkpointing: completed rows are flushed to `path`
// as they finish and their indices recorded in `path`.ckpt; a rerun resumes
// from the last complete row and the final file is byte-identical to an
// uninterrupted run.
MaevMap run_sweep_checkpointed(const SweepGrid& grid, int workers, const std::string& path);

// Linearly spaced inclusive grid.
std::vector<double> linspace(double lo, double hi, int count);

// Uniform helpers used by the bundled selective-resonance map scenario: two
// two-level qubits coupled to one resonator, sweeping the second qubit.
SweepGrid default_sr_map_grid();

}  // namespace srqed
