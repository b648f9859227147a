#include "srqed/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace srqed {

Eigensystem::Eigensystem(const Operator& h) : dims(h.dims) {
    if (!h.hermitian && !is_hermitian(h.mat)) {
        throw std::invalid_argument("Eigensystem: operator is not Hermitian");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(h.mat);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("Eigensystem: eigendecomposition failed");
    }
    evals = solver.eigenvalues();
    evecs = solver.eigenvectors();
}

Vector Eigensystem::coords(const StateVector& psi) const {
    if (psi.dims != dims) throw std::invalid_argument("Eigensystem: dimension mismatch");
    return evecs.adjoint() * psi.amps;
}

StateVector Eigensystem::state_at(const Vector& c, double t_ns) const {
    Vector phased(c.size());
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        phased(k) = c(k) * std::polar(1.0, -evals(k) * t_ns);
    }
    return StateVector(dims, evecs * phased);
}

Operator propagator(const Operator& h, double t_ns) {
    return propagator(Eigensystem(h), t_ns);
}

Operator propagator(const Eigensystem& es, double t_ns) {
    Vector phases(es.dim());
    for (int k = 0; k < es.dim(); ++k) {
        phases(k) = std::polar(1.0, -es.evals(k) * t_ns);
    }
    Matrix u = es.evecs * phases.asDiagonal() * es.evecs.adjoint();
    return Operator(es.dims, std::move(u));
}

namespace {

// Spectral amplitude machinery: with c = V^dag psi0 and w_k = V^dag target_k,
// the overlap is sum_j conj(w_jk) e^{-i lambda_j t} c_j, O(D) per time.
struct OverlapKernel {
    const Eigensystem& es;
    Vector c;
    std::vector<Vector> weights;  // conj(w) .* c per target, premultiplied

    OverlapKernel(const Eigensystem& es_, const StateVector& psi0,
                  const std::vector<StateVector>& targets)
        : es(es_), c(es_.coords(psi0)) {
        weights.reserve(targets.size());
        for (const auto& tgt : targets) {
            Vector w = es.coords(tgt);
            weights.push_back(w.conjugate().cwiseProduct(c));
        }
    }

    Complex amplitude(std::size_t target, double t_ns) const {
        const Vector& wk = weights[target];
        Complex a(0.0, 0.0);
        for (Eigen::Index j = 0; j < wk.size(); ++j) {
            a += wk(j) * std::polar(1.0, -es.evals(j) * t_ns);
        }
        return a;
    }

    double probability(std::size_t target, double t_ns) const {
        return std::norm(amplitude(target, t_ns));
    }
};

}  // namespace

Trajectory evolve(const Eigensystem& es, const StateVector& psi0,
                  const std::vector<double>& times_ns, const std::vector<StateVector>& targets,
                  std::vector<std::string> target_names) {
    if (times_ns.empty()) throw std::invalid_argument("evolve: empty time list");
    if (!std::is_sorted(times_ns.begin(), times_ns.end())) {
        throw std::invalid_argument("evolve: times must be sorted ascending");
    }
    for (const auto& tgt : targets) {
        if (tgt.dims != es.dims) throw std::invalid_argument("evolve: target dimension mismatch");
    }
    if (target_names.empty()) {
        for (std::size_t k = 0; k < targets.size(); ++k) {
            target_names.push_back("target_" + std::to_string(k));
        }
    }
    if (target_names.size() != targets.size()) {
        throw std::invalid_argument("evolve: name/target count mismatch");
    }

    OverlapKernel kernel(es, psi0, targets);
    Trajectory traj;
    traj.times_ns = times_ns;
    traj.target_names = std::move(target_names);
    traj.probabilities.resize(static_cast<Eigen::Index>(times_ns.size()),
                              static_cast<Eigen::Index>(targets.size()));
    for (std::size_t ti = 0; ti < times_ns.size(); ++ti) {
        for (std::size_t k = 0; k < targets.size(); ++k) {
            traj.probabilities(static_cast<Eigen::Index>(ti), static_cast<Eigen::Index>(k)) =
                kernel.probability(k, times_ns[ti]);
        }
    }
    traj.final_state = es.state_at(kernel.c, times_ns.back());
    return traj;
}

Trajectory evolve(const Operator& h, const StateVector& psi0, const std::vector<double>& times_ns,
                  const std::vector<StateVector>& targets, std::vector<std::string> target_names) {
    return evolve(Eigensystem(h), psi0, times_ns, targets, std::move(target_names));
}

double transition_probability(const Eigensystem& es, const StateVector& psi0,
                              const StateVector& target, double t_ns) {
    OverlapKernel kernel(es, psi0, {target});
    return kernel.probability(0, t_ns);
}

double transition_probability(const Operator& h, const StateVector& psi0,
                              const StateVector& target, double t_ns) {
    return transition_probability(Eigensystem(h), psi0, target, t_ns);
}

std::pair<double, double> golden_section_max(const std::function<double(double)>& f, double lo,
                                             double hi, double x_tol) {
    constexpr double inv_phi = 0.6180339887498948482;
    double a = lo, b = hi;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > x_tol) {
        if (f1 < f2) {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = f(x2);
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = f(x1);
        }
    }
    return f1 > f2 ? std::make_pair(x1, f1) : std::make_pair(x2, f2);
}

MaevResult maev(const Eigensystem& es, const StateVector& psi0, const StateVector& target,
                double t_max_ns, double dt_ns) {
    if (dt_ns <= 0.0) throw std::invalid_argument("maev: dt must be > 0");
    if (t_max_ns < dt_ns) throw std::invalid_argument("maev: t_max must be >= dt");

    OverlapKernel kernel(es, psi0, {target});

    // Grid scan. Improvements below the tie tolerance do not move the argmax,
    // so the earliest time wins on (numerically) flat stretches.
    constexpr double tie_tol = 1e-12;
    const int n_steps = static_cast<int>(std::floor(t_max_ns / dt_ns + 1e-9));
    double best_t = dt_ns;
    double best_p = -1.0;
    for (int i = 1; i <= n_steps; ++i) {
        const double t = i * dt_ns;
        const double p = kernel.probability(0, t);
        if (p > best_p + tie_tol) {
            best_p = p;
            best_t = t;
        }
    }

    auto [t_ref, p_ref] = golden_section_max(
        [&](double t) { return kernel.probability(0, t); }, std::max(0.0, best_t - dt_ns),
        std::min(t_max_ns, best_t + dt_ns), 1e-4);
    if (p_ref > best_p + tie_tol) {
        best_p = p_ref;
        best_t = t_ref;
    }
    return {best_p, best_t};
}

MaevResult maev(const Operator& h, const StateVector& psi0, const StateVector& target,
                double t_max_ns, double dt_ns) {
    return maev(Eigensystem(h), psi0, target, t_max_ns, dt_ns);
}

double rabi_frequency(double delta_ghz, double g_ghz, int n) {
    if (n < 0) throw std::invalid_argument("rabi_frequency: photon number must be >= 0");
    return std::sqrt(delta_ghz * delta_ghz + 4.0 * g_ghz * g_ghz * (n + 1));
}

double energy_expectation(const Operator& h, const StateVector& psi) {
    if (psi.dims != h.dims) throw std::invalid_argument("energy_expectation: dimension mismatch");
    return (psi.amps.adjoint() * h.mat * psi.amps)(0, 0).real();
}

}  // namespace srqed
