#include "srqed/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace srqed {

namespace {

bool strictly_increasing(const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
        if (!(v[i] > v[i - 1])) return false;
    }
    return true;
}

}  // namespace

void SweepGrid::validate() const {
    if (g_values_ghz.empty() || freq_values_ghz.empty()) {
        throw std::invalid_argument("SweepGrid: empty grid");
    }
    if (!strictly_increasing(g_values_ghz) || !strictly_increasing(freq_values_ghz)) {
        throw std::invalid_argument("SweepGrid: grid values must be strictly increasing");
    }
    base_spec.validate();
    if (swept_qubit < 0 || swept_qubit >= static_cast<int>(base_spec.modes.size()) ||
        base_spec.modes[swept_qubit].kind != ModeKind::Qubit) {
        throw std::invalid_argument("SweepGrid: swept_qubit is not a qubit mode");
    }
    if (swept_coupling < 0 || swept_coupling >= static_cast<int>(base_spec.couplings.size())) {
        throw std::invalid_argument("SweepGrid: swept_coupling out of range");
    }
    const auto dims = base_spec.dims();
    basis_index(rot0.initial, dims);
    basis_index(rot0.target, dims);
    basis_index(rot1.initial, dims);
    basis_index(rot1.target, dims);
    if (dt_ns <= 0.0) throw std::invalid_argument("SweepGrid: dt must be > 0");
}

std::vector<double> linspace(double lo, double hi, int count) {
    if (count < 1) throw std::invalid_argument("linspace: count must be >= 1");
    std::vector<double> v(count);
    if (count == 1) {
        v[0] = lo;
        return v;
    }
    for (int i = 0; i < count; ++i) {
        v[i] = lo + (hi - lo) * static_cast<double>(i) / (count - 1);
    }
    return v;
}

namespace {

CellResult evaluate_cell(const SweepGrid& grid, double g_ghz, double freq_ghz) {
    SystemSpec spec = grid.base_spec.retuned(grid.swept_qubit, freq_ghz);
    for (double& g : spec.couplings[grid.swept_coupling].g_per_transition_ghz) g = g_ghz;

    const Eigensystem es(build_hamiltonian(spec));
    const auto dims = spec.dims();
    // Window: 1.25 resonant periods of the swept coupling; a decoupled cell
    // (g = 0) has identically zero transfer, so any window works there.
    const double g_window = g_ghz > 0.0 ? g_ghz : 0.01;
    const double t_max = 1.25 / (2.0 * g_window);

    CellResult out;
    out.rot0 = maev(es, StateVector::basis_state(dims, grid.rot0.initial),
                    StateVector::basis_state(dims, grid.rot0.target), t_max, grid.dt_ns);
    out.rot1 = maev(es, StateVector::basis_state(dims, grid.rot1.initial),
                    StateVector::basis_state(dims, grid.rot1.target), t_max, grid.dt_ns);
    return out;
}

// Runs cells [begin, end) of the flattened grid across `workers` threads.
// Results land in `cells` by index, so assembly order does not matter.
void run_cells(const SweepGrid& grid, std::vector<CellResult>& cells,
               const std::vector<std::size_t>& todo, int workers,
               const std::function<void(std::size_t)>& on_cell_done) {
    const std::size_t n_freq = grid.freq_values_ghz.size();
    std::atomic<std::size_t> next{0};
    std::mutex fail_mutex;
    std::string fail_message;
    std::atomic<bool> failed{false};

    auto body = [&]() {
        while (!failed.load(std::memory_order_relaxed)) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= todo.size()) break;
            const std::size_t cell = todo[slot];
            const std::size_t gi = cell / n_freq;
            const std::size_t fi = cell % n_freq;
            try {
                cells[cell] =
                    evaluate_cell(grid, grid.g_values_ghz[gi], grid.freq_values_ghz[fi]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(fail_mutex);
                if (!failed.exchange(true)) {
                    fail_message = "sweep cell (" + std::to_string(gi) + "," +
                                   std::to_string(fi) + ") failed: " + e.what();
                }
                return;
            }
            if (on_cell_done) on_cell_done(cell);
        }
    };

    if (workers <= 1) {
        body();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(body);
        for (auto& t : pool) t.join();
    }
    if (failed.load()) throw std::runtime_error(fail_message);
}

std::string format_row(const MaevMap& map, std::size_t gi, std::size_t fi) {
    const CellResult& cell = map.at(gi, fi);
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n",
                  map.grid.g_values_ghz[gi], map.grid.freq_values_ghz[fi], cell.rot0.max_prob,
                  cell.rot0.t_at_max_ns, cell.rot1.max_prob, cell.rot1.t_at_max_ns);
    return buf;
}

constexpr const char* kCsvHeader = "g2_ghz,freq_ghz,rot0_maev,rot0_t_ns,rot1_maev,rot1_t_ns\n";

}  // namespace

MaevMap run_sweep(const SweepGrid& grid, int workers) {
    if (workers < 1) throw std::invalid_argument("run_sweep: workers must be >= 1");
    grid.validate();

    MaevMap map;
    map.grid = grid;
    map.cells.resize(grid.g_values_ghz.size() * grid.freq_values_ghz.size());
    std::vector<std::size_t> todo(map.cells.size());
    for (std::size_t i = 0; i < todo.size(); ++i) todo[i] = i;
    run_cells(grid, map.cells, todo, workers, nullptr);
    return map;
}

void write_csv(const MaevMap& map, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("write_csv: cannot open " + path);
    out << kCsvHeader;
    for (std::size_t gi = 0; gi < map.grid.g_values_ghz.size(); ++gi) {
        for (std::size_t fi = 0; fi < map.grid.freq_values_ghz.size(); ++fi) {
            out << format_row(map, gi, fi);
        }
    }
    if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

namespace {

// Reads previously flushed rows. Returns the number of leading complete rows
// that can be reused verbatim (0 when the checkpoint is unusable).
std::size_t read_checkpoint(const std::string& path, std::size_t n_rows, std::size_t n_cols,
                            std::vector<std::string>& row_text) {
    std::ifstream ckpt(path + ".ckpt");
    if (!ckpt) return 0;
    std::vector<bool> seen(n_rows, false);
    std::size_t count = 0;
    std::string line;
    while (std::getline(ckpt, line)) {
        if (line.empty()) continue;
        std::size_t idx = 0;
        try {
            idx = static_cast<std::size_t>(std::stoul(line));
        } catch (...) {
            return 0;
        }
        if (idx >= n_rows || seen[idx]) return 0;
        seen[idx] = true;
        ++count;
    }
    // Rows are flushed in order, so a usable checkpoint is a prefix.
    std::size_t prefix = 0;
    while (prefix < n_rows && seen[prefix]) ++prefix;
    if (prefix != count) return 0;

    std::ifstream csv(path, std::ios::binary);
    if (!csv) return 0;
    if (!std::getline(csv, line) || line + "\n" != kCsvHeader) return 0;
    row_text.clear();
    for (std::size_t r = 0; r < prefix; ++r) {
        std::string rows;
        for (std::size_t c = 0; c < n_cols; ++c) {
            if (!std::getline(csv, line)) return 0;
            rows += line;
            rows += '\n';
        }
        row_text.push_back(std::move(rows));
    }
    return prefix;
}

bool parse_row_text(const std::string& text, std::size_t n_cols, std::size_t gi, MaevMap& map) {
    std::istringstream is(text);
    std::string line;
    for (std::size_t fi = 0; fi < n_cols; ++fi) {
        if (!std::getline(is, line)) return false;
        CellResult cell;
        double g = 0.0, f = 0.0;
        if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf,%lf,%lf", &g, &f, &cell.rot0.max_prob,
                        &cell.rot0.t_at_max_ns, &cell.rot1.max_prob,
                        &cell.rot1.t_at_max_ns) != 6) {
            return false;
        }
        map.cells[gi * n_cols + fi] = cell;
    }
    return true;
}

}  // namespace

MaevMap run_sweep_checkpointed(const SweepGrid& grid, int workers, const std::string& path) {
    if (workers < 1) throw std::invalid_argument("run_sweep_checkpointed: workers must be >= 1");
    grid.validate();

    const std::size_t n_rows = grid.g_values_ghz.size();
    const std::size_t n_cols = grid.freq_values_ghz.size();

    MaevMap map;
    map.grid = grid;
    map.cells.resize(n_rows * n_cols);

    std::vector<std::string> reused;
    std::size_t done_rows = read_checkpoint(path, n_rows, n_cols, reused);
    for (std::size_t r = 0; r < done_rows; ++r) {
        if (!parse_row_text(reused[r], n_cols, r, map)) {
            done_rows = 0;
            break;
        }
    }

    // Rewrite header plus reused rows, then stream newly completed rows.
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("run_sweep_checkpointed: cannot open " + path);
    std::ofstream ckpt(path + ".ckpt", std::ios::binary | std::ios::trunc);
    if (!ckpt) throw std::runtime_error("run_sweep_checkpointed: cannot open " + path + ".ckpt");
    out << kCsvHeader;
    for (std::size_t r = 0; r < done_rows; ++r) {
        out << reused[r];
        ckpt << r << '\n';
    }
    out.flush();
    ckpt.flush();

    std::vector<std::size_t> todo;
    for (std::size_t cell = done_rows * n_cols; cell < map.cells.size(); ++cell) {
        todo.push_back(cell);
    }

    std::mutex flush_mutex;
    std::vector<std::size_t> row_remaining(n_rows, n_cols);
    std::size_t next_flush = done_rows;
    std::vector<bool> row_done(n_rows, false);
    for (std::size_t r = 0; r < done_rows; ++r) row_done[r] = true;

    auto on_cell_done = [&](std::size_t cell) {
        const std::size_t gi = cell / n_cols;
        std::lock_guard<std::mutex> lock(flush_mutex);
        if (--row_remaining[gi] > 0) return;
        row_done[gi] = true;
        while (next_flush < n_rows && row_done[next_flush]) {
            for (std::size_t fi = 0; fi < n_cols; ++fi) out << format_row(map, next_flush, fi);
            out.flush();
            ckpt << next_flush << '\n';
            ckpt.flush();
            ++next_flush;
        }
    };

    run_cells(grid, map.cells, todo, workers, on_cell_done);
    if (!out) throw std::runtime_error("run_sweep_checkpointed: write failed for " + path);
    return map;
}

SweepGrid default_sr_map_grid() {
    SweepGrid grid;
    grid.g_values_ghz = linspace(0.01, 0.20, 40);
    grid.freq_values_ghz = linspace(5.90, 6.15, 60);

    SystemSpec spec;
    spec.modes = {ModeSpec::qubit({7.0}), ModeSpec::qubit({6.0}), ModeSpec::resonator(6.0, 3)};
    spec.couplings = {{0, 2, {0.2}, false}, {1, 2, {0.05}, false}};
    grid.base_spec = std::move(spec);
    grid.swept_qubit = 1;
    grid.swept_coupling = 1;
    grid.rot0 = {BasisLabel{0, 1, 0}, BasisLabel{0, 0, 1}};
    grid.rot1 = {BasisLabel{1, 1, 0}, BasisLabel{1, 0, 1}};
    return grid;
}

}  // namespace srqed
