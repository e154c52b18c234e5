// hyrad — steady-state photon/phonon statistics, entanglement, and radiance
// for one or two qubits coupled to a cavity and a mechanical mode.
//
// Subcommands: point, sweep, dressed, validate.
// Exit codes: 0 success, 1 validation-suite failure, 2 invalid flags or
// config, 3 solver failure.

#include <hyrad/hyrad.hpp>

#include <CLI11.hpp>

#include <chrono>
#include <iostream>
#include <random>

using namespace hyrad;

namespace {

struct PointArgs {
    double delta = 0.0;
    double j = 0.1;
    double omega = 1.0;
    double gamma_c = 10.0;
    double gamma_m = 10.0;
    std::string atoms = "both";
    std::string cutoffs = "auto";
    std::string convention = "paper";
    bool verify_uniqueness = false;
};

std::pair<bool, std::pair<int, int>> parse_cutoffs(const std::string& s) {
    if (s == "auto") return {true, {3, 3}};
    const auto comma = s.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("--cutoffs: expected 'auto' or 'Nc,Nm'");
    try {
        const int nc = std::stoi(s.substr(0, comma));
        const int nm = std::stoi(s.substr(comma + 1));
        if (nc < 1 || nm < 1) throw std::invalid_argument("cutoffs must be >= 1");
        return {false, {nc, nm}};
    } catch (const std::exception&) {
        throw std::invalid_argument("--cutoffs: expected 'auto' or 'Nc,Nm'");
    }
}

SweepConfig config_from_point(const PointArgs& args) {
    SweepConfig cfg;
    // degenerate range: auto cutoffs then converge at this very point
    cfg.delta_range = {args.delta, args.delta, 2};
    cfg.j_values = {args.j};
    cfg.omega = args.omega;
    cfg.gamma_c = args.gamma_c;
    cfg.gamma_m = args.gamma_m;
    cfg.convention = convention_from_string(args.convention);
    cfg.verify_uniqueness = args.verify_uniqueness;
    const auto [auto_cut, pair] = parse_cutoffs(args.cutoffs);
    cfg.cutoffs.auto_converge = auto_cut;
    cfg.cutoffs.cavity = pair.first;
    cfg.cutoffs.mech = pair.second;
    return cfg;
}

int cmd_point(const PointArgs& args) {
    const SweepConfig cfg = config_from_point(args);
    SweepRecord rec;
    if (args.atoms == "both") {
        rec = run_point(args.delta, args.j, cfg);
    } else {
        const int n_atoms = args.atoms == "1" ? 1 : 2;
        rec.delta = args.delta;
        rec.j = args.j;
        try {
            const auto [nc, nm] = resolve_cutoffs(args.j, cfg);
            rec.cavity_cutoff = nc;
            rec.mech_cutoff = nm;
            SteadyStateOptions opt;
            opt.verify_uniqueness = cfg.verify_uniqueness;
            const ModelParams p = cfg.model(n_atoms, args.delta, args.j, nc, nm);
            const SteadyStateResult ss = steady_state(build_liouvillian(p, cfg.convention), opt);
            const ObservableSet obs = compute_observables(ss.rho, ss.residual);
            (n_atoms == 1 ? rec.one_atom : rec.two_atom) = obs;
        } catch (const std::exception& e) {
            rec.error = e.what();
        }
    }
    if (!rec.error.empty()) {
        std::cerr << "solver failure " << rec.error << "\n";
        return 3;
    }
    json out = record_to_json(rec);
    out["version"] = k_version;
    out["dissipator_convention"] = to_string(cfg.convention);
    std::cout << out.dump(2) << "\n";
    return 0;
}

struct SweepArgs {
    std::string config_path;
    std::string out_prefix;
    std::string format = "csv";
    int workers = 0;  // 0: use config / environment default
};

int cmd_sweep(const SweepArgs& args) {
    SweepConfig cfg = load_sweep_config(args.config_path);
    if (args.workers > 0) cfg.workers = args.workers;

    const auto t0 = std::chrono::steady_clock::now();
    const SweepGrid grid = sweep_2d(cfg);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (args.format == "csv")
        write_csv(args.out_prefix + ".csv", grid.records);
    else
        write_json_records(args.out_prefix + ".json", grid.records);
    if (grid.j_values.size() > 1) {
        write_matrix_csv(args.out_prefix + ".R.csv", grid, "radiance");
        write_matrix_csv(args.out_prefix + ".n1.csv", grid, "n1");
        write_matrix_csv(args.out_prefix + ".n2.csv", grid, "n2");
        write_matrix_csv(args.out_prefix + ".en2.csv", grid, "en2");
    }
    const RunManifest manifest = make_manifest(cfg, grid.records, wall);
    write_manifest(args.out_prefix + ".manifest.json", manifest);

    std::cerr << "wrote " << grid.records.size() << " points in " << wall << " s ("
              << manifest.failed_points << " failed)\n";
    return manifest.failed_points == 0 ? 0 : 3;
}

struct DressedArgs {
    double j = 1.0;
    double delta = 0.0;
    int atoms = 1;
};

std::string ket_label(const HilbertSpace& space, long index) {
    std::string label = "|";
    std::vector<int> levels(static_cast<std::size_t>(space.sites()));
    for (int s = space.sites() - 1; s >= 0; --s) {
        levels[static_cast<std::size_t>(s)] = static_cast<int>(index % space.dim(s));
        index /= space.dim(s);
    }
    const int n_atoms = space.sites() - 2;
    for (int i = 0; i < n_atoms; ++i) label += levels[static_cast<std::size_t>(i)] == 0 ? 'g' : 'e';
    label += std::to_string(levels[static_cast<std::size_t>(n_atoms)]);
    label += std::to_string(levels[static_cast<std::size_t>(n_atoms) + 1]);
    return label + ">";
}

int cmd_dressed(const DressedArgs& args) {
    ModelParams p;
    p.delta = args.delta;
    p.j_coupling = args.j;
    p.omega_pump = 0.0;
    p.n_atoms = args.atoms;
    p.cavity_cutoff = 1;
    p.mech_cutoff = 1;
    const HilbertSpace space = p.space();

    std::cout << "one-excitation manifold: atoms=" << args.atoms << " J=" << args.j
              << " delta=" << args.delta << " (pump off)\n";
    char line[64];
    for (const auto& ep : one_excitation_manifold(p, space)) {
        std::snprintf(line, sizeof(line), "  E = %+12.8f   ", ep.value);
        std::cout << line;
        for (long i = 0; i < ep.vector.size(); ++i) {
            const cplx amp = ep.vector(i);
            if (std::abs(amp) < 1e-12) continue;
            std::snprintf(line, sizeof(line), "%+9.6f %s  ", amp.real(), ket_label(space, i).c_str());
            std::cout << line;
        }
        std::cout << "\n";
    }
    std::cout << "pair splitting: " << fmt_double(bright_pair_splitting(p)) << "\n";
    return 0;
}

// ------------------------------- validate --------------------------------------

struct Check {
    std::string name;
    bool passed;
    std::string detail;
};

double bloch_formula(double omega, double delta, double kappa, DissipatorConvention conv) {
    if (conv == DissipatorConvention::paper)
        return omega * omega / (2.0 * omega * omega + kappa * kappa + delta * delta);
    return omega * omega / (2.0 * omega * omega + 0.25 * kappa * kappa + delta * delta);
}

Check check_bloch(DissipatorConvention conv) {
    double worst = 0.0;
    for (const auto [omega, delta] : {std::pair{0.7, 0.3}, {1.0, 0.0}, {0.2, -1.5}}) {
        ModelParams p;
        p.delta = delta;
        p.j_coupling = 0.0;
        p.omega_pump = omega;
        p.n_atoms = 1;
        p.gamma_c = 1.0;
        p.gamma_m = 1.0;
        p.cavity_cutoff = 1;
        p.mech_cutoff = 1;
        const HilbertSpace space = p.space();
        const auto [rho, residual] = steady_state(build_liouvillian(p, conv));
        const Operator sm = annihilator(space, 0);
        const double pe = real_expectation(sm.adjoint() * sm, rho);
        worst = std::max(worst, std::abs(pe - bloch_formula(omega, delta, p.kappa, conv)));
    }
    return {"bloch-steady-state", worst < 1e-9, "max error " + fmt_double(worst)};
}

Check check_flux(DissipatorConvention conv) {
    std::mt19937 rng(97);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 6; ++trial) {
        ModelParams p;
        p.delta = 4.0 * (unit(rng) - 0.5);
        p.j_coupling = 0.05 + 2.0 * unit(rng);
        p.omega_pump = 0.3 + unit(rng);
        p.gamma_c = 0.5 + 10.0 * unit(rng);
        p.gamma_m = 0.5 + 10.0 * unit(rng);
        p.n_atoms = 1 + trial % 2;
        p.cavity_cutoff = 2;
        p.mech_cutoff = 2;
        const auto [rho, residual] = steady_state(build_liouvillian(p, conv));
        const ObservableSet obs = compute_observables(rho, residual);
        const double lhs = p.gamma_c * obs.mean_photon;
        const double rhs = p.gamma_m * obs.mean_phonon;
        worst = std::max(worst, std::abs(lhs - rhs) / std::max({lhs, rhs, 1e-14}));
    }
    return {"flux-identity", worst < 1e-8, "max relative error " + fmt_double(worst)};
}

Check check_en_analytic() {
    const HilbertSpace space({2, 2});
    double worst = 0.0;
    for (double theta : {0.2, 0.5, M_PI / 4}) {
        DenseVector psi(4);
        psi << std::cos(theta), 0.0, 0.0, std::sin(theta);
        const double en = log_negativity(DensityMatrix::pure(space, psi));
        worst = std::max(worst, std::abs(en - std::log2(1.0 + std::sin(2.0 * theta))));
    }
    DenseVector product(4);
    product << 0.8, 0.6, 0.0, 0.0;  // (0.8|0> + 0.6|1>) (x) |0>
    worst = std::max(worst, std::abs(log_negativity(DensityMatrix::pure(space, product))));
    return {"log-negativity-analytic", worst < 1e-9, "max error " + fmt_double(worst)};
}

Check check_evolve(DissipatorConvention conv) {
    ModelParams p;
    p.delta = 0.0;
    p.j_coupling = 0.1;
    p.omega_pump = 1.0;
    p.cavity_cutoff = 1;
    p.mech_cutoff = 1;
    const Superoperator lio = build_liouvillian(p, conv);
    const double h_scale = hamiltonian(p, p.space()).max_abs();
    const double dt = 0.01 / std::max({p.gamma_c, p.gamma_m, p.kappa, h_scale});
    const DensityMatrix evolved =
        evolve(DensityMatrix::vacuum(lio.space()), lio, 50.0 / p.kappa, dt);
    const auto [rho_ss, residual] = steady_state(lio);
    const double dist = evolved.trace_distance(rho_ss);
    return {"evolve-vs-steady-state", dist < 1e-6, "trace distance " + fmt_double(dist)};
}

int cmd_validate(const std::string& convention, bool quick) {
    const DissipatorConvention conv = convention_from_string(convention);
    std::vector<Check> checks;
    checks.push_back(check_bloch(conv));
    checks.push_back(check_flux(conv));
    checks.push_back(check_en_analytic());
    if (!quick) checks.push_back(check_evolve(conv));

    bool all = true;
    for (const auto& c : checks) {
        std::cout << (c.passed ? "PASS" : "FAIL") << "  " << c.name << "  (" << c.detail
                  << ")\n";
        all = all && c.passed;
    }
    std::cout << (all ? "all checks passed" : "checks FAILED") << " [convention "
              << convention << (quick ? ", quick" : "") << "]\n";
    return all ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"steady-state simulator for tripartite atom-photon-phonon cavity systems"};
    app.require_subcommand(1);

    PointArgs point_args;
    auto* point = app.add_subcommand("point", "solve a single (delta, J) parameter point");
    point->add_option("--delta", point_args.delta, "detuning in units of kappa")->required();
    point->add_option("--j", point_args.j, "tripartite coupling J in units of kappa")->required();
    point->add_option("--omega", point_args.omega, "pump Rabi frequency (default 1)");
    point->add_option("--gamma-c", point_args.gamma_c, "cavity decay rate (default 10)");
    point->add_option("--gamma-m", point_args.gamma_m, "mechanical decay rate (default 10)");
    point->add_option("--atoms", point_args.atoms, "1, 2, or both (default both)")
        ->check(CLI::IsMember({"1", "2", "both"}));
    point->add_option("--cutoffs", point_args.cutoffs, "auto or Nc,Nm (default auto)");
    point->add_option("--convention", point_args.convention, "dissipator convention")
        ->check(CLI::IsMember({"paper", "standard"}));
    point->add_flag("--verify-uniqueness", point_args.verify_uniqueness,
                    "re-solve with a second constraint row and compare");

    SweepArgs sweep_args;
    auto* sweep = app.add_subcommand("sweep", "run a detuning/coupling sweep from a config");
    sweep->add_option("--config", sweep_args.config_path, "JSON sweep config")->required();
    sweep->add_option("--out", sweep_args.out_prefix, "output path prefix")->required();
    sweep->add_option("--format", sweep_args.format, "csv or json (default csv)")
        ->check(CLI::IsMember({"csv", "json"}));
    sweep->add_option("--workers", sweep_args.workers, "worker threads (default from config)");

    DressedArgs dressed_args;
    auto* dressed = app.add_subcommand("dressed", "print the one-excitation dressed levels");
    dressed->add_option("--j", dressed_args.j, "tripartite coupling J")->required();
    dressed->add_option("--atoms", dressed_args.atoms, "1 or 2 (default 1)")
        ->check(CLI::IsMember({"1", "2"}));
    dressed->add_option("--delta", dressed_args.delta, "detuning (default 0)");

    std::string validate_convention = "paper";
    bool validate_quick = false;
    auto* validate = app.add_subcommand("validate", "run the built-in oracle suite");
    validate->add_option("--convention", validate_convention, "dissipator convention")
        ->check(CLI::IsMember({"paper", "standard"}));
    validate->add_flag("--quick", validate_quick, "skip the time-integration oracle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 2;
    }

    try {
        if (point->parsed()) return cmd_point(point_args);
        if (sweep->parsed()) return cmd_sweep(sweep_args);
        if (dressed->parsed()) return cmd_dressed(dressed_args);
        if (validate->parsed()) return cmd_validate(validate_convention, validate_quick);
    } catch (const SolverError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
