#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "srqed/gates.hpp"

#include <cmath>

using namespace srqed;

namespace {

int count_returns(const Eigensystem& es, const StateVector& psi0, double t_max, double dt,
                  double threshold) {
    int returns = 0;
    bool below = false;
    double p_prev2 = 1.0, p_prev = 1.0;
    for (double t = dt; t <= t_max + 1e-12; t += dt) {
        const double p = transition_probability(es, psi0, psi0, t);
        if (p < 0.9) below = true;
        if (below && p_prev >= threshold && p_prev >= p_prev2 && p_prev >= p) {
            ++returns;
            below = false;
        }
        p_prev2 = p_prev;
        p_prev = p;
    }
    return returns;
}

}  // namespace

TEST_CASE("ideal gate actions") {
    CHECK(ideal_action(GateKind::CPhase, {0, 0}).sign == 1.0);
    CHECK(ideal_action(GateKind::CPhase, {0, 1}).sign == -1.0);
    CHECK(ideal_action(GateKind::CPhase, {1, 1}).sign == 1.0);

    CHECK(ideal_action(GateKind::CCPhase, {0, 0, 1}).sign == -1.0);
    CHECK(ideal_action(GateKind::CCPhase, {1, 0, 1}).sign == 1.0);

    CHECK(ideal_action(GateKind::Fredkin, {0, 1, 0}).bits == std::vector<int>{0, 1, 0});
    CHECK(ideal_action(GateKind::Fredkin, {1, 1, 0}).bits == std::vector<int>{1, 0, 1});
    CHECK(ideal_action(GateKind::Fredkin, {1, 0, 1}).bits == std::vector<int>{1, 1, 0});
    CHECK(ideal_action(GateKind::Fredkin, {1, 1, 1}).sign == 1.0);

    CHECK_THROWS_AS(ideal_action(GateKind::CPhase, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("gate fidelity basics") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const StateVector a = computational_input(p, {0, 1});
    const StateVector b = computational_input(p, {1, 1});
    CHECK(gate_fidelity(a, a) == doctest::Approx(1.0));
    CHECK(gate_fidelity(a, b) == doctest::Approx(0.0));

    Vector phased = a.amps * std::polar(1.0, 1.234);
    CHECK(gate_fidelity(StateVector(a.dims, phased), a) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("c-phase protocol construction") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    CHECK(p.stages.size() == 1);
    CHECK(p.dims() == std::vector<int>{3, 3, 4});
    CHECK(p.stages[0].duration_ns == doctest::Approx(1.0 / (2.0 * 0.0488)).epsilon(1e-12));

    CPhaseParams two;
    two.three_level = false;
    const GateProtocol p2 = build_cphase_protocol(two);
    CHECK(p2.dims() == std::vector<int>{2, 2, 4});

    CPhaseParams bad;
    bad.q1_freqs_ghz = {5.0};  // three-level needs two transitions
    CHECK_THROWS_AS(build_cphase_protocol(bad), std::invalid_argument);
}

TEST_CASE("zero-coupling protocol only applies diagonal phases") {
    GateProtocol p = build_cphase_protocol(CPhaseParams{});
    for (auto& c : p.stages[0].spec.couplings) {
        for (double& g : c.g_per_transition_ghz) g = 0.0;
    }
    p.stages[0].duration_ns = 3.7;

    const StateVector psi0 = superposition_input(p);
    const ProtocolRun run = run_protocol(p, psi0);
    CHECK(run.duration_ns == doctest::Approx(3.7));
    const Operator h = build_hamiltonian(p.stages[0].spec);
    for (int idx = 0; idx < psi0.dim(); ++idx) {
        const Complex expected =
            psi0.amps(idx) * std::polar(1.0, -h.mat(idx, idx).real() * 3.7);
        CHECK(std::abs(run.final_state.amps(idx) - expected) < 1e-10);
    }

    const FidelityReport rep = run_gate_report(p, false);
    CHECK(rep.leakage < 1e-12);
}

TEST_CASE("run_protocol validates inputs and conserves norm") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const StateVector psi0 = superposition_input(p);
    const ProtocolRun run = run_protocol(p, psi0);
    CHECK(std::abs(run.final_state.amps.norm() - 1.0) < 1e-9);

    const StateVector wrong = StateVector::basis_state({2, 2}, BasisLabel{0, 0});
    CHECK_THROWS_AS(run_protocol(p, wrong), std::invalid_argument);
    CHECK_THROWS_AS(run_protocol(p, psi0, 0.0), std::invalid_argument);
}

TEST_CASE("three-level c-phase hits the reported operating point") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const FidelityReport rep = run_gate_report(p, false);
    CHECK(rep.duration_ns == doctest::Approx(10.2459).epsilon(1e-4));
    CHECK(rep.total_fidelity == doctest::Approx(0.9142).epsilon(0.01));
    CHECK(rep.total_fidelity >= 0.89);
    CHECK(rep.total_fidelity <= 0.95);

    // Leakage accounting: population either stays computational or leaks.
    double comp = 0.0;
    const StateVector fin = run_protocol(p, superposition_input(p)).final_state;
    const auto dims = p.dims();
    for (int i1 : {0, 1}) {
        for (int i2 : {0, 1}) {
            comp += std::norm(fin.amps(basis_index(BasisLabel{i1, i2, 0}, dims)));
        }
    }
    CHECK(comp + rep.leakage == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("c-phase sign structure: one branch flips, the others agree") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const FidelityReport rep = run_gate_report(p, false);
    REQUIRE(rep.per_input.size() == 4);
    // per_input overlaps already include the ideal sign, so after the flip is
    // divided out every branch must sit within 0.4 rad of the common phase.
    const Complex ref = rep.per_input[0].overlap;
    for (const auto& rec : rep.per_input) {
        CHECK(std::abs(rec.overlap) > 0.5);
        CHECK(std::abs(std::arg(rec.overlap * std::conj(ref))) < 0.4);
    }
}

TEST_CASE("unwanted oscillation completes two periods per wanted period") {
    // The two-state picture predicts full returns; the third level of the
    // control caps the bare-basis return near 0.95 (its |1,0,1> <-> |2,0,0>
    // hybridization is the same effect that widens the state-dependent
    // splitting). The period structure is what matters here: two returns,
    // at half the wanted period and at the full period.
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const Eigensystem es(build_hamiltonian(p.stages[0].spec));
    const StateVector rot1_init =
        StateVector::basis_state(p.dims(), BasisLabel{1, 1, 0});
    const double t_period = p.stages[0].duration_ns;
    const int returns = count_returns(es, rot1_init, t_period, 0.002, 0.93);
    CHECK(returns >= 2);

    auto return_prob = [&](double t) {
        return transition_probability(es, rot1_init, rot1_init, t);
    };
    const auto [t_half, p_half] =
        golden_section_max(return_prob, 0.40 * t_period, 0.60 * t_period, 1e-4);
    const auto [t_full, p_full] =
        golden_section_max(return_prob, 0.90 * t_period, 1.05 * t_period, 1e-4);
    CHECK(p_half > 0.93);
    CHECK(p_full > 0.93);
    CHECK(std::abs(t_half - 0.5 * t_period) < 0.08 * t_period);
    CHECK(std::abs(t_full - t_period) < 0.08 * t_period);
}

TEST_CASE("perfect-qubit c-phase reaches 0.9 at its nominal duration") {
    CPhaseParams two;
    two.three_level = false;
    const GateProtocol p = build_cphase_protocol(two);
    const FidelityReport rep = run_gate_report(p, false);
    CHECK(rep.duration_ns == doctest::Approx(21.7391).epsilon(1e-4));
    CHECK(rep.total_fidelity >= 0.90);
    CHECK(rep.total_fidelity == doctest::Approx(0.9593).epsilon(0.01));
}

TEST_CASE("duration refinement improves the fidelity within the +-10% window") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const FidelityReport nominal = run_gate_report(p, false);
    const FidelityReport refined = run_gate_report(p, true);
    CHECK(refined.total_fidelity >= nominal.total_fidelity);
    CHECK(refined.duration_ns >= 0.9 * p.nominal_duration_ns());
    CHECK(refined.duration_ns <= 1.1 * p.nominal_duration_ns());
    // Anchor from the first verified run: the optimum sits ~4% late.
    CHECK(refined.total_fidelity == doctest::Approx(0.9597).epsilon(0.01));
    CHECK(refined.duration_ns == doctest::Approx(10.695).epsilon(0.01));
}

TEST_CASE("cc-phase protocol and report") {
    const GateProtocol p = build_ccphase_protocol(CCPhaseParams{});
    CHECK(p.dims() == std::vector<int>{3, 3, 3, 4});
    CHECK(total_dim(p.dims()) == 108);
    const FidelityReport rep = run_gate_report(p, false);
    CHECK(rep.duration_ns == doctest::Approx(14.2857).epsilon(1e-4));
    CHECK(rep.total_fidelity == doctest::Approx(0.8512).epsilon(0.01));
    CHECK(rep.total_fidelity >= 0.82);
    CHECK(rep.total_fidelity <= 0.90);
}

TEST_CASE("cc-phase wanted oscillation dominates the unwanted ones") {
    const GateProtocol p = build_ccphase_protocol(CCPhaseParams{});
    const Eigensystem es(build_hamiltonian(p.stages[0].spec));
    const auto dims = p.dims();
    auto maev_for = [&](const BasisLabel& ini, const BasisLabel& tgt) {
        return maev(es, StateVector::basis_state(dims, ini), StateVector::basis_state(dims, tgt),
                    17.9, 0.01)
            .max_prob;
    };
    const double want = maev_for(BasisLabel{0, 0, 1, 0}, BasisLabel{0, 0, 0, 1});
    CHECK(want > 0.9);
    CHECK(maev_for(BasisLabel{0, 1, 1, 0}, BasisLabel{0, 1, 0, 1}) < 0.2);
    CHECK(maev_for(BasisLabel{1, 0, 1, 0}, BasisLabel{1, 0, 0, 1}) < 0.2);
    CHECK(maev_for(BasisLabel{1, 1, 1, 0}, BasisLabel{1, 1, 0, 1}) < 0.2);
}

TEST_CASE("controlled-swap stage durations follow the exchange conditions") {
    FredkinParams params;
    params.g_swap_ghz = 0.05;
    const GateProtocol p = build_fredkin_protocol(params);
    CHECK(p.stages.size() == 2);
    CHECK(p.stages[0].duration_ns == doctest::Approx(15.0));
    CHECK(p.stages[1].duration_ns == doctest::Approx(5.0));
    CHECK(p.dims() == std::vector<int>{3, 3, 3, 4, 4});
    CHECK(total_dim(p.dims()) == 432);

    const GateProtocol defaults = build_fredkin_protocol(FredkinParams{});
    CHECK(defaults.stages[0].duration_ns == doctest::Approx(375.0));
    CHECK(defaults.stages[1].duration_ns == doctest::Approx(125.0));
}

TEST_CASE("controlled-swap rejects unsatisfiable stage conditions") {
    FredkinParams params;
    params.g2a_ghz = 0.02;
    params.g3b_ghz = 0.01;
    CHECK_THROWS_AS(build_fredkin_protocol(params), protocol_error);

    FredkinParams params2;
    params2.g3a_ghz = 0.02;
    params2.g2b_ghz = 0.015;
    CHECK_THROWS_AS(build_fredkin_protocol(params2), protocol_error);
}

TEST_CASE("controlled-swap truth table populations") {
    const GateProtocol p = build_fredkin_protocol(FredkinParams{});
    const FidelityReport rep = run_gate_report(p, false);
    REQUIRE(rep.per_input.size() == 8);
    for (const auto& rec : rep.per_input) {
        CAPTURE(rec.input_bits);
        if (rec.input_bits[0] == 0) {
            CHECK(rec.probability >= 0.9);  // control off: inputs return
        }
    }
    // Swap branch anchors, pinned from the first verified run.
    CHECK(rep.per_input[5].input_bits == std::vector<int>{1, 0, 1});
    CHECK(rep.per_input[5].probability == doctest::Approx(0.9540).epsilon(0.01));
    CHECK(rep.per_input[6].input_bits == std::vector<int>{1, 1, 0});
    CHECK(rep.per_input[6].probability == doctest::Approx(0.9497).epsilon(0.01));
}

TEST_CASE("resonance location on the two-level and three-level systems") {
    SystemSpec two;
    two.modes = {ModeSpec::qubit({7.0}), ModeSpec::qubit({6.0}), ModeSpec::resonator(6.0, 3)};
    two.couplings = {{0, 2, {0.2}, false}, {1, 2, {0.0488}, false}};
    const OscillationSpec rot0{BasisLabel{0, 1, 0}, BasisLabel{0, 0, 1}};
    const OscillationSpec rot1{BasisLabel{1, 1, 0}, BasisLabel{1, 0, 1}};
    const double res0 = find_resonance(two, 1, {5.90, 6.00, 0.002}, rot0);
    CHECK(res0 == doctest::Approx(5.95842).epsilon(2e-4));
    const double res1 = find_resonance(two, 1, {6.00, 6.10, 0.002}, rot1);
    CHECK(res1 == doctest::Approx(6.03464).epsilon(2e-4));

    SystemSpec three;
    three.modes = {ModeSpec::qubit({5.0, 6.2}), ModeSpec::qubit({6.035, 7.335}),
                   ModeSpec::resonator(6.0, 3)};
    three.couplings = {{0, 2, {0.2, 0.2}, false}, {1, 2, {0.0488, 0.0488}, false}};
    const double res3 = find_resonance(three, 1, {5.95, 6.12, 0.005}, rot0);
    CHECK(res3 == doctest::Approx(6.0346).epsilon(2e-4));
}

TEST_CASE("resonance location input validation") {
    SystemSpec two;
    two.modes = {ModeSpec::qubit({7.0}), ModeSpec::qubit({6.0}), ModeSpec::resonator(6.0, 3)};
    two.couplings = {{0, 2, {0.2}, false}, {1, 2, {0.05}, false}};
    const OscillationSpec rot0{BasisLabel{0, 1, 0}, BasisLabel{0, 0, 1}};

    CHECK_THROWS_AS(find_resonance(two, 1, {6.1, 5.9, 0.002}, rot0), std::invalid_argument);
    CHECK_THROWS_AS(find_resonance(two, 1, {5.9, 6.1, 0.0}, rot0), std::invalid_argument);
    CHECK_THROWS_AS(find_resonance(two, 2, {5.9, 6.1, 0.002}, rot0), std::invalid_argument);

    // Oscillation that does not move an excitation off the target qubit.
    const OscillationSpec bad{BasisLabel{0, 1, 0}, BasisLabel{0, 1, 0}};
    CHECK_THROWS_AS(find_resonance(two, 1, {5.9, 6.1, 0.002}, bad), std::invalid_argument);

    // Target qubit without a coupling to the oscillation's resonator.
    SystemSpec decoupled = two;
    decoupled.couplings = {{0, 2, {0.2}, false}};
    CHECK_THROWS_AS(find_resonance(decoupled, 1, {5.9, 6.1, 0.002}, rot0),
                    std::invalid_argument);
}

TEST_CASE("frame calibration recovers deliberately rotated states") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const StateVector ideal = ideal_superposition_output(p);
    const StateVector rotated = apply_frame(p, ideal, {0.8, -1.7});
    const auto theta = calibrate_frame(p, rotated, ideal);
    CHECK(gate_fidelity(apply_frame(p, rotated, theta), ideal) ==
          doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("report serialization") {
    const GateProtocol p = build_cphase_protocol(CPhaseParams{});
    const FidelityReport rep = run_gate_report(p, false);
    const std::string text = rep.to_text();
    CHECK(text.find("kind: cphase") != std::string::npos);
    CHECK(text.find("total_fidelity:") != std::string::npos);
    CHECK(text.find("duration_ns:") != std::string::npos);
    CHECK(text.find("leakage:") != std::string::npos);
    CHECK(text.find("input 00:") != std::string::npos);
    CHECK(text.find("input 11:") != std::string::npos);

    const std::string csv = rep.to_csv();
    CHECK(csv.rfind("input,overlap_re,overlap_im,probability\n", 0) == 0);
    int lines = 0;
    for (char c : csv) {
        if (c == '\n') ++lines;
    }
    CHECK(lines == 5);
}
