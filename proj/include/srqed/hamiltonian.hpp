// hamiltonian.hpp — System assembly: qubit/resonator mode lists plus coupling
// terms, built into a dense Hermitian matrix, and the closed-form dispersive
// frequency predictors used to locate selective resonances.
//
// Unit conventions: every frequency and coupling in the public API is linear
// (nu = omega/2pi) in GHz; assembled Hamiltonians are angular (rad/ns); time
// is in ns; hbar = 1.

#pragma once

#include "srqed/hilbert.hpp"

#include <vector>

namespace srqed {

// One qubit-resonator coupling. g_per_transition_ghz holds g_{i,i+1} for each
// qubit transition i <-> i+1 (one entry per transition). With rwa=true the
// excitation-nonconserving terms a sigma^- + a^dag sigma^+ are dropped.
struct CouplingSpec {
    int qubit_index{0};
    int resonator_index{0};
    std::vector<double> g_per_transition_ghz;
    bool rwa{false};
};

// Ordered mode list plus couplings; the single source of truth for assembly.
// Qubit-qubit couplings are not representable: couplings always pair a qubit
// with a resonator.
struct SystemSpec {
    std::vector<ModeSpec> modes;
    std::vector<CouplingSpec> couplings;

    std::vector<int> dims() const;
    int dim() const { return total_dim(dims()); }

    void validate() const;  // throws std::invalid_argument

    // Copy with the target qubit's 0<->1 transition frequency replaced.
    SystemSpec retuned(int qubit_mode, double nu01_ghz) const;
};

// H = sum_r 2pi nu_r a^dag a
//   + sum_q sum_i E_i |i><i|          (E_0 = 0, E_{i+1} = E_i + 2pi nu_{i,i+1})
//   + sum_couplings sum_i 2pi g_i (a + a^dag)(sigma^+_{i+1,i} + sigma^-_{i,i+1})
// in rad/ns, each term embedded into the full product space. Result is tagged
// Hermitian. With rwa the coupling becomes 2pi g (a sigma^+ + a^dag sigma^-).
Operator build_hamiltonian(const SystemSpec& spec);

// Second-order dispersive predictions. Both use the detuning nu_q - nu_r:
// the qubit level ordering relative to the resonator sets the sign of the
// shift (a qubit above the resonator pushes the resonator frequency down when
// the qubit is in its ground state, and vice versa), which matches the exact
// dressed spectrum and the operating points used by the gate protocols.

// Number-state-dependent qubit frequency: nu_q + chi (2n+1), chi = g^2/(nu_q - nu_r).
// Throws std::domain_error on zero detuning.
double dispersive_qubit_frequency(double nu_q_ghz, double nu_r_ghz, double g_ghz, int n);

// Qubit-state-dependent resonator frequency: nu_r + s chi with s = +1 for
// qubit state |1>, -1 for |0>, chi = g^2/(nu_q - nu_r).
// Throws std::domain_error on zero detuning.
double dispersive_resonator_frequency(double nu_r_ghz, double nu_q_ghz, double g_ghz,
                                      int qubit_state);

// Multi-qubit shifted resonator frequency nu_r + sum_i s_i chi_i with
// s_i = +1/-1 for qubit i in |1>/|0>. The chi_i are caller-supplied.
double qsd_shifted_frequency(double nu_r_ghz, const std::vector<double>& chi_ghz,
                             const std::vector<int>& states);

}  // namespace srqed
