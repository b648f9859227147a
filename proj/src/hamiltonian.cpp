#include "srqed/hamiltonian.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>

namespace srqed {

std::vector<int> SystemSpec::dims() const {
    std::vector<int> d;
    d.reserve(modes.size());
    for (const auto& m : modes) d.push_back(m.dim);
    return d;
}

void SystemSpec::validate() const {
    if (modes.empty()) throw std::invalid_argument("SystemSpec: no modes");
    for (const auto& m : modes) m.validate();

    std::set<std::pair<int, int>> seen;
    for (const auto& c : couplings) {
        const int nm = static_cast<int>(modes.size());
        if (c.qubit_index < 0 || c.qubit_index >= nm || c.resonator_index < 0 ||
            c.resonator_index >= nm) {
            throw std::invalid_argument("SystemSpec: coupling mode index out of range");
        }
        if (modes[c.qubit_index].kind != ModeKind::Qubit) {
            throw std::invalid_argument("SystemSpec: coupling qubit_index is not a qubit");
        }
        if (modes[c.resonator_index].kind != ModeKind::Resonator) {
            throw std::invalid_argument("SystemSpec: coupling resonator_index is not a resonator");
        }
        const std::size_t n_trans = static_cast<std::size_t>(modes[c.qubit_index].dim - 1);
        if (c.g_per_transition_ghz.size() != n_trans) {
            throw std::invalid_argument(
                "SystemSpec: coupling needs one g per qubit transition (" +
                std::to_string(n_trans) + ")");
        }
        for (double g : c.g_per_transition_ghz) {
            if (!std::isfinite(g) || g < 0.0) {
                throw std::invalid_argument("SystemSpec: couplings must be finite and >= 0");
            }
        }
        if (!seen.insert({c.qubit_index, c.resonator_index}).second) {
            throw std::invalid_argument("SystemSpec: duplicate coupling for qubit/resonator pair");
        }
    }
}

SystemSpec SystemSpec::retuned(int qubit_mode, double nu01_ghz) const {
    if (qubit_mode < 0 || qubit_mode >= static_cast<int>(modes.size()) ||
        modes[qubit_mode].kind != ModeKind::Qubit) {
        throw std::invalid_argument("SystemSpec::retuned: not a qubit mode");
    }
    SystemSpec out = *this;
    out.modes[qubit_mode].level_freqs_ghz[0] = nu01_ghz;
    out.modes[qubit_mode].validate();
    return out;
}

Operator build_hamiltonian(const SystemSpec& spec) {
    spec.validate();
    const std::vector<int> dims = spec.dims();
    const int d = total_dim(dims);
    Matrix h = Matrix::Zero(d, d);

    // Bare mode terms. Qubit level energies are anchored at E_0 = 0 and
    // accumulate the transition frequencies.
    for (std::size_t k = 0; k < spec.modes.size(); ++k) {
        const ModeSpec& m = spec.modes[k];
        Matrix local = Matrix::Zero(m.dim, m.dim);
        if (m.kind == ModeKind::Resonator) {
            const double omega = two_pi * m.level_freqs_ghz[0];
            for (int n = 0; n < m.dim; ++n) local(n, n) = omega * n;
        } else {
            double energy = 0.0;
            for (int i = 1; i < m.dim; ++i) {
                energy += two_pi * m.level_freqs_ghz[i - 1];
                local(i, i) = energy;
            }
        }
        h += embed(Operator({m.dim}, std::move(local), true), static_cast<int>(k), dims).mat;
    }

    // Coupling terms, one per qubit transition.
    for (const auto& c : spec.couplings) {
        const int qdim = spec.modes[c.qubit_index].dim;
        const int rdim = spec.modes[c.resonator_index].dim;
        const Matrix a = annihilation_op(rdim).mat;
        const Matrix a_full = embed(Operator({rdim}, a), c.resonator_index, dims).mat;

        for (int i = 0; i + 1 < qdim; ++i) {
            const double g = two_pi * c.g_per_transition_ghz[i];
            if (g == 0.0) continue;
            const Matrix raise = transition_op(qdim, i + 1, i).mat;  // |i+1><i|
            const Matrix raise_full = embed(Operator({qdim}, raise), c.qubit_index, dims).mat;
            if (c.rwa) {
                const Matrix term = g * (a_full * raise_full);
                h += term + term.adjoint();
            } else {
                h += g * (a_full + a_full.adjoint()) * (raise_full + raise_full.adjoint());
            }
        }
    }

    return Operator(dims, std::move(h), true);
}

namespace {
double dispersive_chi(double nu_q_ghz, double nu_r_ghz, double g_ghz) {
    const double detuning = nu_q_ghz - nu_r_ghz;
    if (detuning == 0.0) {
        throw std::domain_error("dispersive shift undefined on resonance (nu_q == nu_r)");
    }
    return g_ghz * g_ghz / detuning;
}
}  // namespace

double dispersive_qubit_frequency(double nu_q_ghz, double nu_r_ghz, double g_ghz, int n) {
    if (n < 0) throw std::invalid_argument("dispersive_qubit_frequency: n must be >= 0");
    return nu_q_ghz + dispersive_chi(nu_q_ghz, nu_r_ghz, g_ghz) * (2 * n + 1);
}

double dispersive_resonator_frequency(double nu_r_ghz, double nu_q_ghz, double g_ghz,
                                      int qubit_state) {
    if (qubit_state != 0 && qubit_state != 1) {
        throw std::invalid_argument("dispersive_resonator_frequency: state must be 0 or 1");
    }
    const double s = qubit_state == 1 ? 1.0 : -1.0;
    return nu_r_ghz + s * dispersive_chi(nu_q_ghz, nu_r_ghz, g_ghz);
}

double qsd_shifted_frequency(double nu_r_ghz, const std::vector<double>& chi_ghz,
                             const std::vector<int>& states) {
    if (chi_ghz.size() != states.size()) {
        throw std::invalid_argument("qsd_shifted_frequency: chi/states length mismatch");
    }
    double nu = nu_r_ghz;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (states[i] != 0 && states[i] != 1) {
            throw std::invalid_argument("qsd_shifted_frequency: states must be 0 or 1");
        }
        nu += (states[i] == 1 ? 1.0 : -1.0) * chi_ghz[i];
    }
    return nu;
}

}  // namespace srqed
