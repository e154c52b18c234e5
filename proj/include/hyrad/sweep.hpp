// sweep.hpp — Parameter scans over detuning and coupling: paired one-atom /
// two-atom solves, radiance, the cutoff convergence gate, and a deterministic
// parallel work queue.

#pragma once

#include "observables.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>

namespace hyrad {

struct CutoffCeiling : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// ---------------------------------- config ------------------------------------

struct Range {
    double min = 0.0;
    double max = 0.0;
    int points = 2;

    void validate() const {
        if (points < 2) throw std::invalid_argument("Range: points must be >= 2");
        if (!(min <= max)) throw std::invalid_argument("Range: min must not exceed max");
    }

    std::vector<double> grid() const {
        validate();
        std::vector<double> g(static_cast<std::size_t>(points));
        const double h = (max - min) / static_cast<double>(points - 1);
        for (int i = 0; i < points; ++i) g[static_cast<std::size_t>(i)] = min + h * i;
        return g;
    }
};

struct CutoffPolicy {
    bool auto_converge = false;
    int cavity = 3;
    int mech = 3;
    double tol = 1e-6;  // relative, on <n>, <m>, E_N
    int ceiling = 12;
};

struct SweepConfig {
    Range delta_range{-1.0, 1.0, 801};
    std::vector<double> j_values{0.1};
    double omega = 1.0;
    double gamma_c = 10.0;
    double gamma_m = 10.0;
    CutoffPolicy cutoffs;
    DissipatorConvention convention = DissipatorConvention::paper;
    int workers = 1;
    bool verify_uniqueness = false;

    void validate() const {
        delta_range.validate();
        if (j_values.empty()) throw std::invalid_argument("SweepConfig: no J values");
        if (omega < 0) throw std::invalid_argument("SweepConfig: omega must be nonnegative");
        if (gamma_c < 0 || gamma_m < 0)
            throw std::invalid_argument("SweepConfig: decay rates must be nonnegative");
        if (cutoffs.cavity < 1 || cutoffs.mech < 1)
            throw std::invalid_argument("SweepConfig: cutoffs must be >= 1");
        if (cutoffs.ceiling < 1) throw std::invalid_argument("SweepConfig: ceiling must be >= 1");
        if (workers < 1) throw std::invalid_argument("SweepConfig: workers must be >= 1");
    }

    ModelParams model(int n_atoms, double delta, double j, int nc, int nm) const {
        ModelParams p;
        p.delta = delta;
        p.j_coupling = j;
        p.omega_pump = omega;
        p.gamma_c = gamma_c;
        p.gamma_m = gamma_m;
        p.n_atoms = n_atoms;
        p.cavity_cutoff = nc;
        p.mech_cutoff = nm;
        return p;
    }
};

// ---------------------------------- records -----------------------------------

struct SweepRecord {
    double delta = 0.0;
    double j = 0.0;
    int cavity_cutoff = 0;
    int mech_cutoff = 0;
    std::optional<ObservableSet> one_atom;
    std::optional<ObservableSet> two_atom;
    std::optional<double> radiance;
    std::string classification = "undefined";
    std::string error;  // empty on success
};

// ------------------------------ cutoff convergence -----------------------------

namespace detail {

struct MonitoredObservables {
    double n, m, en;
};

inline MonitoredObservables solve_monitored(const SweepConfig& cfg, double delta, double j,
                                            int nc, int nm, int n_atoms) {
    const ModelParams p = cfg.model(n_atoms, delta, j, nc, nm);
    const Superoperator lio = build_liouvillian(p, cfg.convention);
    const SteadyStateResult ss = steady_state(lio);
    const ObservableSet obs = compute_observables(ss.rho, ss.residual);
    return {obs.mean_photon, obs.mean_phonon, obs.log_negativity};
}

inline double rel_change(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-14});
    return std::abs(a - b) / scale;
}

inline double max_rel_change(const MonitoredObservables& a, const MonitoredObservables& b) {
    return std::max({rel_change(a.n, b.n), rel_change(a.m, b.m), rel_change(a.en, b.en)});
}

}  // namespace detail

// Smallest cutoffs, starting from (3, 3), such that doubling the photon
// cutoff, the phonon cutoff, or both shifts every monitored observable
// (<n>, <m>, E_N) by less than tol relative. Doubling both is checked as
// well because photon-phonon pairs populate the joint |k,k> ladder, which
// single-axis doubling never opens. Checked on the two-atom system (the
// one-atom system is strictly less excited at equal parameters).
inline std::pair<int, int> converge_cutoffs(double delta, double j, const SweepConfig& config,
                                            double tol) {
    config.validate();
    if (config.omega == 0.0) return {1, 1};  // vacuum steady state, exact at any cutoff

    int nc = 3, nm = 3;
    while (true) {
        if (nc > config.cutoffs.ceiling || nm > config.cutoffs.ceiling)
            throw CutoffCeiling("converge_cutoffs: exceeded ceiling " +
                                std::to_string(config.cutoffs.ceiling) + " at tol " +
                                std::to_string(tol));
        const auto base = detail::solve_monitored(config, delta, j, nc, nm, 2);
        const bool cav_ok =
            detail::max_rel_change(base, detail::solve_monitored(config, delta, j, 2 * nc, nm, 2)) < tol;
        const bool mech_ok =
            detail::max_rel_change(base, detail::solve_monitored(config, delta, j, nc, 2 * nm, 2)) < tol;
        const bool joint_ok =
            cav_ok && mech_ok &&
            detail::max_rel_change(base, detail::solve_monitored(config, delta, j, 2 * nc, 2 * nm, 2)) < tol;
        if (cav_ok && mech_ok && joint_ok) return {nc, nm};
        if (!cav_ok) ++nc;
        if (!mech_ok) ++nm;
        if (cav_ok && mech_ok) {
            ++nc;
            ++nm;
        }
    }
}

// Cutoffs for a given J: the fixed policy values, or the convergence gate run
// at the candidate resonances (0, ±J, ±sqrt(2) J intersected with the scan
// range) taking the elementwise maximum.
inline std::pair<int, int> resolve_cutoffs(double j, const SweepConfig& config) {
    if (!config.cutoffs.auto_converge) return {config.cutoffs.cavity, config.cutoffs.mech};
    const double lo = config.delta_range.min, hi = config.delta_range.max;
    std::vector<double> candidates{0.0, j, -j, std::sqrt(2.0) * j, -std::sqrt(2.0) * j};
    int nc = 1, nm = 1;
    bool any = false;
    for (double d : candidates) {
        if (d < lo || d > hi) continue;
        any = true;
        const auto [c, m] = converge_cutoffs(d, j, config, config.cutoffs.tol);
        nc = std::max(nc, c);
        nm = std::max(nm, m);
    }
    if (!any) {
        const auto [c, m] = converge_cutoffs(0.5 * (lo + hi), j, config, config.cutoffs.tol);
        nc = c;
        nm = m;
    }
    return {nc, nm};
}

// ---------------------------------- run_point ----------------------------------

// Solves the one-atom and two-atom systems at identical effective parameters
// and assembles the full record, including the radiance witness.
inline SweepRecord run_point(double delta, double j, const SweepConfig& config) {
    config.validate();
    SweepRecord rec;
    rec.delta = delta;
    rec.j = j;
    try {
        const auto [nc, nm] = resolve_cutoffs(j, config);
        rec.cavity_cutoff = nc;
        rec.mech_cutoff = nm;
        SteadyStateOptions opt;
        opt.verify_uniqueness = config.verify_uniqueness;
        for (int n_atoms : {1, 2}) {
            const ModelParams p = config.model(n_atoms, delta, j, nc, nm);
            const Superoperator lio = build_liouvillian(p, config.convention);
            const SteadyStateResult ss = steady_state(lio, opt);
            const ObservableSet obs = compute_observables(ss.rho, ss.residual);
            (n_atoms == 1 ? rec.one_atom : rec.two_atom) = obs;
        }
        rec.radiance = radiance(rec.two_atom->mean_photon, rec.one_atom->mean_photon);
        rec.classification = classify_radiance(rec.radiance);
    } catch (const std::exception& e) {
        rec.error = "(delta=" + std::to_string(delta) + ", j=" + std::to_string(j) + "): " + e.what();
    }
    return rec;
}

// Run a precomputed-cutoff point (sweeps resolve cutoffs once per J).
namespace detail {

inline SweepRecord run_point_fixed(double delta, double j, int nc, int nm,
                                   const SweepConfig& config) {
    SweepConfig fixed = config;
    fixed.cutoffs.auto_converge = false;
    fixed.cutoffs.cavity = nc;
    fixed.cutoffs.mech = nm;
    return run_point(delta, j, fixed);
}

}  // namespace detail

// ----------------------------------- sweeps ------------------------------------

// Maps run_point over the delta grid for every J value. Points are
// independent tasks pulled from a shared counter; each record lands in its
// preassigned slot, so the output ordering (by j, then delta) and the values
// are identical for any worker count.
inline std::vector<SweepRecord> sweep_detuning(const SweepConfig& config) {
    config.validate();
    const std::vector<double> deltas = config.delta_range.grid();
    const std::size_t nj = config.j_values.size();
    const std::size_t nd = deltas.size();

    std::vector<std::pair<int, int>> cutoffs_per_j(nj);
    for (std::size_t ji = 0; ji < nj; ++ji)
        cutoffs_per_j[ji] = resolve_cutoffs(config.j_values[ji], config);

    std::vector<SweepRecord> records(nj * nd);
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        while (true) {
            const std::size_t task = next.fetch_add(1);
            if (task >= records.size()) return;
            const std::size_t ji = task / nd;
            const std::size_t di = task % nd;
            const auto [nc, nm] = cutoffs_per_j[ji];
            records[task] =
                detail::run_point_fixed(deltas[di], config.j_values[ji], nc, nm, config);
        }
    };

    const int n_workers = std::max(1, config.workers);
    if (n_workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return records;
}

struct SweepGrid {
    std::vector<double> j_values;
    std::vector<double> deltas;
    std::vector<SweepRecord> records;  // row-major, j outer, delta inner

    const SweepRecord& at(std::size_t ji, std::size_t di) const {
        return records.at(ji * deltas.size() + di);
    }
};

// Outer loop over J, inner over delta; the flat records double as the
// long-format output rows.
inline SweepGrid sweep_2d(const SweepConfig& config) {
    SweepGrid grid;
    grid.j_values = config.j_values;
    grid.deltas = config.delta_range.grid();
    grid.records = sweep_detuning(config);
    return grid;
}

// ------------------------------- peak refinement -------------------------------

// Location of the maximum of y(x), refined by a parabola through the grid
// argmax and its neighbors. Assumes a uniform grid.
inline double refine_peak(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 3)
        throw std::invalid_argument("refine_peak: need matching arrays of >= 3 points");
    std::size_t i = 0;
    for (std::size_t k = 1; k < y.size(); ++k)
        if (y[k] > y[i]) i = k;
    if (i == 0 || i + 1 == y.size()) return x[i];
    const double denom = y[i - 1] - 2.0 * y[i] + y[i + 1];
    if (denom == 0.0) return x[i];
    const double h = x[i + 1] - x[i];
    return x[i] + 0.5 * h * (y[i - 1] - y[i + 1]) / denom;
}

// Default worker count: the optional environment override, else 1.
inline int default_workers() {
    if (const char* env = std::getenv("HYRAD_WORKERS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    return 1;
}

}  // namespace hyrad
