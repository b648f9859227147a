// dynamics.hpp — Exact closed-system time evolution for time-independent
// Hamiltonians. One Hermitian eigendecomposition serves every requested time;
// amplitudes are evaluated as spectral sums, so norm and energy are conserved
// to machine precision.

#pragma once

#include "srqed/hilbert.hpp"

#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace srqed {

// Shared read-only factorization of a Hermitian operator (rad/ns).
struct Eigensystem {
    std::vector<int> dims;
    Eigen::VectorXd evals;
    Matrix evecs;  // columns

    explicit Eigensystem(const Operator& h);  // throws on non-Hermitian input

    int dim() const { return static_cast<int>(evals.size()); }

    // V^dag psi: coordinates of a state in the eigenbasis.
    Vector coords(const StateVector& psi) const;

    // Lab-frame state at time t from eigenbasis coordinates.
    StateVector state_at(const Vector& coords, double t_ns) const;
};

// U = exp(-i H t), unitary. The Eigensystem overload reuses the factorization.
Operator propagator(const Operator& h, double t_ns);
Operator propagator(const Eigensystem& es, double t_ns);

// Sampled overlap probabilities |<target_k| e^{-iHt} |psi0>|^2.
struct Trajectory {
    std::vector<double> times_ns;
    std::vector<std::string> target_names;
    Eigen::MatrixXd probabilities;  // times x targets
    StateVector final_state;
};

Trajectory evolve(const Eigensystem& es, const StateVector& psi0,
                  const std::vector<double>& times_ns, const std::vector<StateVector>& targets,
                  std::vector<std::string> target_names = {});
Trajectory evolve(const Operator& h, const StateVector& psi0,
                  const std::vector<double>& times_ns, const std::vector<StateVector>& targets,
                  std::vector<std::string> target_names = {});

double transition_probability(const Eigensystem& es, const StateVector& psi0,
                              const StateVector& target, double t_ns);
double transition_probability(const Operator& h, const StateVector& psi0,
                              const StateVector& target, double t_ns);

// Maximum of the transition probability over the grid {dt, 2dt, ..., t_max},
// refined by golden-section search within +-dt of the grid argmax (refinement
// kept only when it improves on the grid value; ties resolve to the earliest
// grid time).
struct MaevResult {
    double max_prob{0.0};
    double t_at_max_ns{0.0};
};

MaevResult maev(const Eigensystem& es, const StateVector& psi0, const StateVector& target,
                double t_max_ns, double dt_ns);
MaevResult maev(const Operator& h, const StateVector& psi0, const StateVector& target,
                double t_max_ns, double dt_ns);

// Vacuum-field Rabi frequency sqrt(delta^2 + 4 g^2 (n+1)) in GHz for a qubit
// exchanging with a resonator holding n photons.
double rabi_frequency(double delta_ghz, double g_ghz, int n);

// <psi|H|psi>, rad/ns.
double energy_expectation(const Operator& h, const StateVector& psi);

// Golden-section maximization of a unimodal function on [lo, hi] to the given
// x tolerance. Returns (argmax, max).
std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double x_tol);

}  // namespace srqed
