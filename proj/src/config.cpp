#include "srqed/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace srqed {

using nlohmann::json;

namespace {

// ------------------------- Strict schema helpers -----------------------------

void check_keys(const json& j, const std::string& path,
                std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw config_error(path + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw config_error(path + ": unknown key '" + item.key() + "'");
    }
}

const json& get_field(const json& j, const std::string& path, const char* key) {
    auto it = j.find(key);
    if (it == j.end()) throw config_error(path + ": missing key '" + key + "'");
    return *it;
}

double get_number(const json& j, const std::string& path, const char* key) {
    const json& f = get_field(j, path, key);
    if (!f.is_number()) throw config_error(path + "." + key + ": expected a number");
    return f.get<double>();
}

double get_number_or(const json& j, const std::string& path, const char* key, double fallback) {
    if (!j.contains(key)) return fallback;
    return get_number(j, path, key);
}

int get_int(const json& j, const std::string& path, const char* key) {
    const json& f = get_field(j, path, key);
    if (!f.is_number_integer()) throw config_error(path + "." + key + ": expected an integer");
    return f.get<int>();
}

int get_int_or(const json& j, const std::string& path, const char* key, int fallback) {
    if (!j.contains(key)) return fallback;
    return get_int(j, path, key);
}

bool get_bool_or(const json& j, const std::string& path, const char* key, bool fallback) {
    if (!j.contains(key)) return fallback;
    const json& f = *j.find(key);
    if (!f.is_boolean()) throw config_error(path + "." + key + ": expected a boolean");
    return f.get<bool>();
}

std::string get_string(const json& j, const std::string& path, const char* key) {
    const json& f = get_field(j, path, key);
    if (!f.is_string()) throw config_error(path + "." + key + ": expected a string");
    return f.get<std::string>();
}

std::vector<double> number_list(const json& f, const std::string& path) {
    if (!f.is_array() || f.empty()) throw config_error(path + ": expected a non-empty array");
    std::vector<double> out;
    for (const auto& v : f) {
        if (!v.is_number()) throw config_error(path + ": expected numbers");
        out.push_back(v.get<double>());
    }
    return out;
}

BasisLabel label_from(const json& f, const std::string& path) {
    if (!f.is_array() || f.empty()) throw config_error(path + ": expected a non-empty array");
    BasisLabel label;
    for (const auto& v : f) {
        if (!v.is_number_integer()) throw config_error(path + ": expected integers");
        label.occupations.push_back(v.get<int>());
    }
    return label;
}

// ------------------------------ Section parsers -------------------------------

SystemSpec parse_system(const json& j, const std::string& path) {
    check_keys(j, path, {"modes", "couplings"});
    SystemSpec spec;

    const json& modes = get_field(j, path, "modes");
    if (!modes.is_array() || modes.empty()) throw config_error(path + ".modes: expected modes");
    for (std::size_t k = 0; k < modes.size(); ++k) {
        const std::string mpath = path + ".modes[" + std::to_string(k) + "]";
        const json& m = modes[k];
        const std::string kind = get_string(m, mpath, "kind");
        if (kind == "resonator") {
            check_keys(m, mpath, {"kind", "freq_ghz", "cutoff"});
            spec.modes.push_back(ModeSpec::resonator(get_number(m, mpath, "freq_ghz"),
                                                     get_int_or(m, mpath, "cutoff", 3)));
        } else if (kind == "qubit") {
            check_keys(m, mpath, {"kind", "level_freqs_ghz"});
            spec.modes.push_back(ModeSpec::qubit(
                number_list(get_field(m, mpath, "level_freqs_ghz"), mpath + ".level_freqs_ghz")));
        } else {
            throw config_error(mpath + ".kind: expected 'qubit' or 'resonator'");
        }
    }

    if (j.contains("couplings")) {
        const json& couplings = *j.find("couplings");
        if (!couplings.is_array()) throw config_error(path + ".couplings: expected an array");
        for (std::size_t k = 0; k < couplings.size(); ++k) {
            const std::string cpath = path + ".couplings[" + std::to_string(k) + "]";
            const json& c = couplings[k];
            check_keys(c, cpath, {"qubit", "resonator", "g_ghz", "rwa"});
            CouplingSpec cs;
            cs.qubit_index = get_int(c, cpath, "qubit");
            cs.resonator_index = get_int(c, cpath, "resonator");
            cs.g_per_transition_ghz = number_list(get_field(c, cpath, "g_ghz"), cpath + ".g_ghz");
            cs.rwa = get_bool_or(c, cpath, "rwa", false);
            spec.couplings.push_back(std::move(cs));
        }
    }

    try {
        spec.validate();
    } catch (const std::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    return spec;
}

TrajectorySection parse_trajectory(const json& j, const std::string& path) {
    // Two shapes: a shared-initial form with named target labels, or an
    // explicit curve list with per-curve initial states.
    TrajectorySection t;
    if (j.contains("curves")) {
        check_keys(j, path, {"curves", "dt_ns", "t_max_ns"});
        const json& curves = *j.find("curves");
        if (!curves.is_array() || curves.empty()) {
            throw config_error(path + ".curves: expected a non-empty array");
        }
        for (std::size_t k = 0; k < curves.size(); ++k) {
            const std::string cpath = path + ".curves[" + std::to_string(k) + "]";
            check_keys(curves[k], cpath, {"name", "initial", "target"});
            TrajectoryCurve curve;
            curve.name = get_string(curves[k], cpath, "name");
            curve.initial = label_from(get_field(curves[k], cpath, "initial"), cpath + ".initial");
            curve.target = label_from(get_field(curves[k], cpath, "target"), cpath + ".target");
            t.curves.push_back(std::move(curve));
        }
    } else {
        check_keys(j, path, {"initial", "targets", "dt_ns", "t_max_ns"});
        const BasisLabel initial = label_from(get_field(j, path, "initial"), path + ".initial");
        const json& targets = get_field(j, path, "targets");
        if (!targets.is_array() || targets.empty()) {
            throw config_error(path + ".targets: expected a non-empty array");
        }
        for (std::size_t k = 0; k < targets.size(); ++k) {
            const std::string tpath = path + ".targets[" + std::to_string(k) + "]";
            check_keys(targets[k], tpath, {"name", "label"});
            TrajectoryCurve curve;
            curve.name = get_string(targets[k], tpath, "name");
            curve.initial = initial;
            curve.target = label_from(get_field(targets[k], tpath, "label"), tpath + ".label");
            t.curves.push_back(std::move(curve));
        }
    }
    t.dt_ns = get_number_or(j, path, "dt_ns", 0.01);
    t.t_max_ns = get_number(j, path, "t_max_ns");
    if (t.dt_ns <= 0.0) throw config_error(path + ".dt_ns: must be > 0");
    if (t.t_max_ns < t.dt_ns) {
        throw config_error(path + ".t_max_ns: produces an empty time list");
    }
    return t;
}

std::vector<double> parse_axis(const json& j, const std::string& path) {
    check_keys(j, path, {"min", "max", "count"});
    const double lo = get_number(j, path, "min");
    const double hi = get_number(j, path, "max");
    const int count = get_int(j, path, "count");
    if (count < 1) throw config_error(path + ".count: must be >= 1");
    return linspace(lo, hi, count);
}

OscillationSpec parse_oscillation(const json& j, const std::string& path) {
    check_keys(j, path, {"initial", "target"});
    OscillationSpec osc;
    osc.initial = label_from(get_field(j, path, "initial"), path + ".initial");
    osc.target = label_from(get_field(j, path, "target"), path + ".target");
    return osc;
}

SweepGrid parse_sweep(const json& j, const std::string& path, const SystemSpec& system) {
    check_keys(j, path, {"g_ghz", "freq_ghz", "swept_qubit", "swept_coupling", "rot0", "rot1",
                         "dt_ns"});
    SweepGrid grid;
    grid.base_spec = system;
    grid.g_values_ghz = parse_axis(get_field(j, path, "g_ghz"), path + ".g_ghz");
    grid.freq_values_ghz = parse_axis(get_field(j, path, "freq_ghz"), path + ".freq_ghz");
    grid.swept_qubit = get_int_or(j, path, "swept_qubit", 1);
    grid.swept_coupling = get_int_or(j, path, "swept_coupling", 1);
    grid.rot0 = parse_oscillation(get_field(j, path, "rot0"), path + ".rot0");
    grid.rot1 = parse_oscillation(get_field(j, path, "rot1"), path + ".rot1");
    grid.dt_ns = get_number_or(j, path, "dt_ns", 0.01);
    try {
        grid.validate();
    } catch (const std::exception& e) {
        throw config_error(path + ": " + e.what());
    }
    return grid;
}

std::vector<double> freq_list_or(const json& j, const std::string& path, const char* key) {
    if (!j.contains(key)) return {};
    return number_list(*j.find(key), path + "." + key);
}

GateSection parse_gate(const json& j, const std::string& path) {
    GateSection g;
    const std::string kind = get_string(j, path, "kind");
    if (kind == "cphase") {
        g.kind = GateKind::CPhase;
        check_keys(j, path,
                   {"kind", "refine", "three_level", "cutoff", "resonator_ghz", "q1_freqs_ghz",
                    "q2_freqs_ghz", "g1_ghz", "g2_ghz"});
        g.cphase.three_level = get_bool_or(j, path, "three_level", true);
        g.cphase.cutoff = get_int_or(j, path, "cutoff", 3);
        g.cphase.resonator_ghz = get_number_or(j, path, "resonator_ghz", 6.0);
        g.cphase.q1_freqs_ghz = freq_list_or(j, path, "q1_freqs_ghz");
        g.cphase.q2_freqs_ghz = freq_list_or(j, path, "q2_freqs_ghz");
        g.cphase.g1_ghz = get_number_or(j, path, "g1_ghz", 0.2);
        g.cphase.g2_ghz = get_number_or(j, path, "g2_ghz", kAuto);
    } else if (kind == "ccphase") {
        g.kind = GateKind::CCPhase;
        check_keys(j, path, {"kind", "refine", "cutoff", "resonator_ghz", "q1_freqs_ghz",
                             "q2_freqs_ghz", "q3_freqs_ghz", "g_control_ghz", "g3_ghz"});
        g.ccphase.cutoff = get_int_or(j, path, "cutoff", 3);
        g.ccphase.resonator_ghz = get_number_or(j, path, "resonator_ghz", 6.0);
        if (j.contains("q1_freqs_ghz")) g.ccphase.q1_freqs_ghz = freq_list_or(j, path, "q1_freqs_ghz");
        if (j.contains("q2_freqs_ghz")) g.ccphase.q2_freqs_ghz = freq_list_or(j, path, "q2_freqs_ghz");
        if (j.contains("q3_freqs_ghz")) g.ccphase.q3_freqs_ghz = freq_list_or(j, path, "q3_freqs_ghz");
        g.ccphase.g_control_ghz = get_number_or(j, path, "g_control_ghz", 0.2);
        g.ccphase.g3_ghz = get_number_or(j, path, "g3_ghz", 0.035);
    } else if (kind == "fredkin") {
        g.kind = GateKind::Fredkin;
        check_keys(j, path,
                   {"kind", "refine", "cutoff", "ra_ghz", "rb_ghz", "q1_freqs_ghz", "g1_ghz",
                    "g_swap_ghz", "g2a_ghz", "g2b_ghz", "g3a_ghz", "g3b_ghz", "anharmonicity_ghz",
                    "stage1_q2_ghz", "stage1_q3_ghz", "stage2_q2_ghz", "stage2_q3_ghz",
                    "auto_tune"});
        FredkinParams& f = g.fredkin;
        f.cutoff = get_int_or(j, path, "cutoff", 3);
        f.ra_ghz = get_number_or(j, path, "ra_ghz", f.ra_ghz);
        f.rb_ghz = get_number_or(j, path, "rb_ghz", f.rb_ghz);
        if (j.contains("q1_freqs_ghz")) f.q1_freqs_ghz = freq_list_or(j, path, "q1_freqs_ghz");
        f.g1_ghz = get_number_or(j, path, "g1_ghz", f.g1_ghz);
        f.g_swap_ghz = get_number_or(j, path, "g_swap_ghz", f.g_swap_ghz);
        f.g2a_ghz = get_number_or(j, path, "g2a_ghz", kAuto);
        f.g2b_ghz = get_number_or(j, path, "g2b_ghz", kAuto);
        f.g3a_ghz = get_number_or(j, path, "g3a_ghz", kAuto);
        f.g3b_ghz = get_number_or(j, path, "g3b_ghz", kAuto);
        f.anharmonicity_ghz = get_number_or(j, path, "anharmonicity_ghz", f.anharmonicity_ghz);
        f.stage1_q2_ghz = get_number_or(j, path, "stage1_q2_ghz", kAuto);
        f.stage1_q3_ghz = get_number_or(j, path, "stage1_q3_ghz", kAuto);
        f.stage2_q2_ghz = get_number_or(j, path, "stage2_q2_ghz", kAuto);
        f.stage2_q3_ghz = get_number_or(j, path, "stage2_q3_ghz", kAuto);
        f.auto_tune = get_bool_or(j, path, "auto_tune", false);
    } else {
        throw config_error(path + ".kind: expected cphase, ccphase, or fredkin");
    }
    g.refine = get_bool_or(j, path, "refine", false);
    return g;
}

FindResonanceSection parse_find_resonance(const json& j, const std::string& path) {
    check_keys(j, path, {"qubit", "scan", "initial", "target"});
    FindResonanceSection s;
    s.qubit = get_int(j, path, "qubit");
    const json& scan = get_field(j, path, "scan");
    check_keys(scan, path + ".scan", {"lo_ghz", "hi_ghz", "step_ghz"});
    s.scan.lo_ghz = get_number(scan, path + ".scan", "lo_ghz");
    s.scan.hi_ghz = get_number(scan, path + ".scan", "hi_ghz");
    s.scan.step_ghz = get_number(scan, path + ".scan", "step_ghz");
    if (!(s.scan.step_ghz > 0.0) || !(s.scan.hi_ghz > s.scan.lo_ghz)) {
        throw config_error(path + ".scan: empty scan range");
    }
    s.osc.initial = label_from(get_field(j, path, "initial"), path + ".initial");
    s.osc.target = label_from(get_field(j, path, "target"), path + ".target");
    return s;
}

}  // namespace

std::vector<double> TrajectorySection::times() const {
    std::vector<double> ts;
    const int n = static_cast<int>(std::floor(t_max_ns / dt_ns + 1e-9));
    ts.reserve(n + 1);
    for (int i = 0; i <= n; ++i) ts.push_back(i * dt_ns);
    return ts;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open config file: " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error(path + ": " + e.what());
    }

    check_keys(j, "config", {"system", "trajectory", "sweep", "gate", "find_resonance", "workers"});
    ScenarioConfig cfg;
    if (j.contains("system")) cfg.system = parse_system(*j.find("system"), "system");
    if (j.contains("trajectory")) {
        cfg.trajectory = parse_trajectory(*j.find("trajectory"), "trajectory");
    }
    if (j.contains("sweep")) {
        if (!cfg.system) throw config_error("sweep: requires a system section");
        cfg.sweep = parse_sweep(*j.find("sweep"), "sweep", *cfg.system);
    }
    if (j.contains("gate")) cfg.gate = parse_gate(*j.find("gate"), "gate");
    if (j.contains("find_resonance")) {
        if (!cfg.system) throw config_error("find_resonance: requires a system section");
        cfg.find_resonance = parse_find_resonance(*j.find("find_resonance"), "find_resonance");
    }
    cfg.workers = get_int_or(j, "config", "workers", 0);
    if (cfg.workers < 0) throw config_error("workers: must be >= 1");
    return cfg;
}

int resolve_workers(int cli_workers, const ScenarioConfig& config) {
    if (cli_workers > 0) return cli_workers;
    if (config.workers > 0) return config.workers;
    if (const char* env = std::getenv("SRQED_WORKERS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    return 1;
}

// ------------------------------ Command runners ------------------------------

namespace {

int classify_and_report(const char* command) {
    try {
        throw;
    } catch (const config_error& e) {
        std::cerr << command << ": config error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << command << ": config error: " << e.what() << '\n';
        return 2;
    } catch (const std::out_of_range& e) {
        std::cerr << command << ": config error: " << e.what() << '\n';
        return 2;
    } catch (const protocol_error& e) {
        std::cerr << command << ": protocol constraint: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << command << ": numerical error: " << e.what() << '\n';
        return 3;
    }
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace

int cmd_simulate(const std::string& config_path, const std::string& out_path) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        if (!cfg.system) throw config_error("simulate: missing system section");
        if (!cfg.trajectory) throw config_error("simulate: missing trajectory section");
        const TrajectorySection& tr = *cfg.trajectory;

        const auto dims = cfg.system->dims();
        const Eigensystem es(build_hamiltonian(*cfg.system));
        const std::vector<double> times = tr.times();

        // One decomposition serves every curve.
        std::vector<Trajectory> per_curve;
        for (const auto& curve : tr.curves) {
            per_curve.push_back(evolve(es, StateVector::basis_state(dims, curve.initial), times,
                                       {StateVector::basis_state(dims, curve.target)},
                                       {curve.name}));
        }

        std::ostringstream os;
        os << "t_ns";
        for (const auto& curve : tr.curves) os << ',' << curve.name;
        os << '\n';
        char buf[64];
        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            std::snprintf(buf, sizeof(buf), "%.9g", times[ti]);
            os << buf;
            for (const auto& traj : per_curve) {
                std::snprintf(buf, sizeof(buf), ",%.9g",
                              traj.probabilities(static_cast<Eigen::Index>(ti), 0));
                os << buf;
            }
            os << '\n';
        }
        write_text_file(out_path, os.str());
        return 0;
    } catch (...) {
        return classify_and_report("simulate");
    }
}

int cmd_sweep(const std::string& config_path, const std::string& out_path, int cli_workers) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        if (!cfg.sweep) throw config_error("sweep: missing sweep section");
        run_sweep_checkpointed(*cfg.sweep, resolve_workers(cli_workers, cfg), out_path);
        return 0;
    } catch (...) {
        return classify_and_report("sweep");
    }
}

int cmd_gate(const std::string& config_path, const std::string& out_path, bool refine_flag) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        if (!cfg.gate) throw config_error("gate: missing gate section");
        const GateSection& section = *cfg.gate;

        GateProtocol protocol;
        switch (section.kind) {
            case GateKind::CPhase: protocol = build_cphase_protocol(section.cphase); break;
            case GateKind::CCPhase: protocol = build_ccphase_protocol(section.ccphase); break;
            case GateKind::Fredkin: protocol = build_fredkin_protocol(section.fredkin); break;
        }
        const FidelityReport report =
            run_gate_report(protocol, section.refine || refine_flag);
        if (!out_path.empty()) write_text_file(out_path, report.to_text());
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s %.6f %.4f %.6f\n", to_string(report.kind).c_str(),
                      report.total_fidelity, report.duration_ns, report.leakage);
        std::cout << buf;
        return 0;
    } catch (...) {
        return classify_and_report("gate");
    }
}

int cmd_find_resonance(const std::string& config_path) {
    try {
        const ScenarioConfig cfg = load_config(config_path);
        if (!cfg.system) throw config_error("find-resonance: missing system section");
        if (!cfg.find_resonance) throw config_error("find-resonance: missing find_resonance section");
        const FindResonanceSection& s = *cfg.find_resonance;
        const double nu = find_resonance(*cfg.system, s.qubit, s.scan, s.osc);
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f\n", nu);
        std::cout << buf;
        return 0;
    } catch (...) {
        return classify_and_report("find-resonance");
    }
}

}  // namespace srqed
