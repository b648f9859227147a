// gates.hpp — Entangling-gate protocols built on selective resonance: a
// controlled-phase gate on two qubits, a doubly-controlled phase gate on
// three, and a two-stage controlled-swap, each executed by exact evolution
// and scored against its ideal output.
//
// Reported phases are measured after removing per-qubit frame rotations
// (virtual-Z calibration): single-qubit phase accumulation is treated as a
// free frame choice, conditional phases are not.

#pragma once

#include "srqed/dynamics.hpp"
#include "srqed/hamiltonian.hpp"
#include "srqed/sweep.hpp"

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace srqed {

// Raised when a protocol's stage conditions cannot be met (CLI exit code 4).
struct protocol_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class GateKind { CPhase, CCPhase, Fredkin };

std::string to_string(GateKind kind);

struct GateStage {
    double duration_ns{0.0};
    SystemSpec spec;
};

struct GateProtocol {
    GateKind kind{GateKind::CPhase};
    std::vector<GateStage> stages;
    std::vector<int> qubit_modes;      // computational qubits, control first
    std::vector<int> resonator_modes;

    std::vector<int> dims() const { return stages.front().spec.dims(); }
    double nominal_duration_ns() const;
};

// ------------------------------- Parameters ---------------------------------

inline constexpr double kAuto = std::numeric_limits<double>::quiet_NaN();

// Controlled-phase on q1 (control) and q2 (target) via one resonator. The
// default three-level parameter set operates the selective resonance with the
// second excited level participating; the two-level variant uses a smaller
// target coupling matched to its narrower state-dependent splitting.
struct CPhaseParams {
    bool three_level{true};
    int cutoff{3};
    double resonator_ghz{6.0};
    std::vector<double> q1_freqs_ghz;  // empty -> variant default
    std::vector<double> q2_freqs_ghz;  // empty -> variant default
    double g1_ghz{0.2};
    double g2_ghz{kAuto};              // NaN -> variant default
};

// Doubly-controlled phase on q1, q2 (controls) and q3 (target).
struct CCPhaseParams {
    int cutoff{3};
    double resonator_ghz{6.0};
    std::vector<double> q1_freqs_ghz{5.0, 6.3};
    std::vector<double> q2_freqs_ghz{5.0, 6.3};
    std::vector<double> q3_freqs_ghz{6.068, 7.3};
    double g_control_ghz{0.2};
    double g3_ghz{0.035};
};

// Controlled-swap: q1 controls, q2/q3 swap through two resonators. Stage 1
// runs the 1.5 pi exchange condition on (q2,Ra) and (q3,Rb); stage 2 swaps the
// roles with the 0.5 pi condition. Each stage requires its two couplings to be
// equal, or the shared duration cannot satisfy both exchange conditions.
//
// The defaults keep the control's second transition far from both resonators
// and its coupling moderate: strong control dressing renormalizes the two
// exchange rates unequally, and the shared stage durations assume matched
// rates.
struct FredkinParams {
    int cutoff{3};
    double ra_ghz{6.0};
    double rb_ghz{6.6};
    std::vector<double> q1_freqs_ghz{5.0, 7.5};
    double g1_ghz{0.1};
    double g_swap_ghz{0.002};  // default for all four swap couplings
    double g2a_ghz{kAuto}, g2b_ghz{kAuto}, g3a_ghz{kAuto}, g3b_ghz{kAuto};
    double anharmonicity_ghz{1.3};  // nu12 - nu01 for q2 and q3
    // Stage operating frequencies (0<->1) of q2/q3. NaN selects the stored
    // defaults located numerically for the parameters above; auto_tune
    // relocates them with find_resonance (slow).
    double stage1_q2_ghz{kAuto}, stage1_q3_ghz{kAuto};
    double stage2_q2_ghz{kAuto}, stage2_q3_ghz{kAuto};
    bool auto_tune{false};
};

GateProtocol build_cphase_protocol(const CPhaseParams& params);
GateProtocol build_ccphase_protocol(const CCPhaseParams& params);
GateProtocol build_fredkin_protocol(const FredkinParams& params);

// ------------------------------ Execution -----------------------------------

struct ProtocolRun {
    StateVector final_state;
    double duration_ns{0.0};
};

// Applies the stage propagators in order (durations scaled by duration_scale).
ProtocolRun run_protocol(const GateProtocol& protocol, const StateVector& psi0,
                         double duration_scale = 1.0);

// |<ideal|final>|^2; global phase immaterial.
double gate_fidelity(const StateVector& final_state, const StateVector& ideal);

// Ideal action on computational bits: output bits and sign.
struct IdealAction {
    std::vector<int> bits;
    double sign{1.0};
};
IdealAction ideal_action(GateKind kind, const std::vector<int>& bits);

// Computational basis input (bits on the qubit modes, resonators in vacuum).
StateVector computational_input(const GateProtocol& protocol, const std::vector<int>& bits);
// Equal superposition over all computational inputs.
StateVector superposition_input(const GateProtocol& protocol);
// Ideal final state for the superposition input.
StateVector ideal_superposition_output(const GateProtocol& protocol);

// ------------------------------- Reporting ----------------------------------

struct InputOverlap {
    std::vector<int> input_bits;
    Complex overlap;        // with the ideal output, frame-corrected
    double probability{0};  // population on the ideal output, frame-free
};

struct FidelityReport {
    GateKind kind{GateKind::CPhase};
    double total_fidelity{0.0};
    double duration_ns{0.0};
    double leakage{0.0};
    std::vector<InputOverlap> per_input;
    std::vector<double> frame_phases;  // calibrated virtual-Z angle per qubit

    std::string to_text() const;
    std::string to_csv() const;
};

// Runs the superposition input plus every computational basis input. With
// refine_duration the stage durations are scaled by a common factor in
// [0.9, 1.1] maximizing the total fidelity; otherwise durations are nominal.
FidelityReport run_gate_report(const GateProtocol& protocol, bool refine_duration);

// Applies the per-qubit frame phases to a final state.
StateVector apply_frame(const GateProtocol& protocol, const StateVector& state,
                        const std::vector<double>& frame_phases);

// Virtual-Z calibration: per-qubit phases maximizing |<ideal|Dz(theta)|state>|^2.
std::vector<double> calibrate_frame(const GateProtocol& protocol, const StateVector& final_state,
                                    const StateVector& ideal);

// --------------------------- Resonance location ------------------------------

struct ScanRange {
    double lo_ghz{0.0};
    double hi_ghz{0.0};
    double step_ghz{0.0};
};

// The target qubit's 0<->1 frequency maximizing the named oscillation's MAEV:
// grid scan over [lo, hi] then golden-section refinement to 0.1 MHz.
double find_resonance(const SystemSpec& spec, int target_qubit, const ScanRange& scan,
                      const OscillationSpec& osc);

}  // namespace srqed
