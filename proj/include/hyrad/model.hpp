// model.hpp — Effective tripartite Hamiltonian, dissipation channels, and the
// lab-frame -> effective-frame parameter map.
//
// Effective frame (rotating at the mechanical frequency):
//   H = Delta a†a + sum_i [ Delta s+_i s-_i − J (s+_i a b + s-_i a† b†)
//                           + Omega (s+_i + s-_i) ]
// All rates and frequencies are in units of the atomic decay kappa.

#pragma once

#include "qspace.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace hyrad {

// ------------------------------ conventions ----------------------------------

// How a channel (rate, c) enters the master equation:
//   paper:     rate * (2 c rho c† − c†c rho − rho c†c)   (population decay 2*rate)
//   standard:  rate * (c rho c† − ½{c†c, rho})           (population decay rate)
enum class DissipatorConvention { paper, standard };

inline const char* to_string(DissipatorConvention c) {
    return c == DissipatorConvention::paper ? "paper" : "standard";
}

inline DissipatorConvention convention_from_string(std::string_view s) {
    if (s == "paper") return DissipatorConvention::paper;
    if (s == "standard") return DissipatorConvention::standard;
    throw std::invalid_argument("unknown dissipator convention: " + std::string(s));
}

// ------------------------------- LabParams -----------------------------------

// Laboratory-frame inputs, any single consistent frequency unit.
struct LabParams {
    double omega_c = 0.0;    // cavity frequency
    double omega_m = 0.0;    // mechanical frequency
    double omega_a = 0.0;    // atomic transition frequency
    double omega_p = 0.0;    // pump frequency
    double g_ca = 0.0;       // atom-cavity coupling
    double g_ma = 0.0;       // atom-mechanics coupling
    double omega_pump = 0.0; // pump Rabi frequency

    void validate() const {
        if (omega_c <= 0 || omega_m <= 0 || omega_a <= 0 || omega_p <= 0)
            throw std::invalid_argument("LabParams: frequencies must be positive");
        if (g_ca < 0 || g_ma < 0 || omega_pump < 0)
            throw std::invalid_argument("LabParams: couplings must be nonnegative");
    }
};

// Effective-frame parameters derived from the displacement transformation.
struct EffectiveFrame {
    double delta = 0.0;          // omega_a − omega_p
    double delta_cavity = 0.0;   // omega_c − (omega_p − omega_m)
    double j_coupling = 0.0;     // g_ma g_ca / omega_m
    double omega_pump = 0.0;
    double eta = 0.0;            // g_ma / omega_m
    double epsilon = 0.0;        // g_ma^2 / omega_m (polaron frequency shift)
    bool eta_in_regime = true;        // eta < 0.1
    bool detuning_consistent = true;  // |delta − delta_cavity| within the model's accuracy
    std::vector<std::string> warnings;
};

// Maps lab-frame parameters to the effective frame. Regime violations warn
// (recorded in .warnings), they do not fail: the caller decides.
inline EffectiveFrame effective_params(const LabParams& lab) {
    lab.validate();
    EffectiveFrame eff;
    eff.eta = lab.g_ma / lab.omega_m;
    eff.epsilon = lab.g_ma * lab.g_ma / lab.omega_m;
    eff.j_coupling = lab.g_ma * lab.g_ca / lab.omega_m;
    eff.omega_pump = lab.omega_pump;
    eff.delta = lab.omega_a - lab.omega_p;
    eff.delta_cavity = lab.omega_c - (lab.omega_p - lab.omega_m);

    eff.eta_in_regime = eff.eta < 0.1;
    if (!eff.eta_in_regime)
        eff.warnings.push_back("eta = g_ma/omega_m >= 0.1: linearized displacement expansion "
                               "is outside its validity regime");

    // The two detuning definitions agree only up to the polaron shift epsilon;
    // deviations of that size are within the effective model's accuracy.
    const double tol = 2.0 * eff.epsilon + 1e-12 * lab.omega_m;
    eff.detuning_consistent = std::abs(eff.delta - eff.delta_cavity) <= tol;
    if (!eff.detuning_consistent)
        eff.warnings.push_back("detuning identity omega_a - omega_p = omega_c - (omega_p - omega_m) "
                               "violated beyond the polaron shift: single-detuning model inconsistent");
    return eff;
}

// ------------------------------- ModelParams ----------------------------------

// Effective-frame model, everything in units of kappa.
struct ModelParams {
    double delta = 0.0;
    double j_coupling = 0.1;
    double omega_pump = 1.0;
    double kappa = 1.0;
    double gamma_c = 10.0;
    double gamma_m = 10.0;
    int n_atoms = 2;
    int cavity_cutoff = 3;
    int mech_cutoff = 3;

    void validate() const {
        if (kappa <= 0) throw std::invalid_argument("ModelParams: kappa must be positive");
        if (gamma_c < 0 || gamma_m < 0)
            throw std::invalid_argument("ModelParams: decay rates must be nonnegative");
        if (n_atoms != 1 && n_atoms != 2)
            throw std::invalid_argument("ModelParams: n_atoms must be 1 or 2");
        if (cavity_cutoff < 1 || mech_cutoff < 1)
            throw std::invalid_argument("ModelParams: Fock cutoffs must be >= 1");
    }

    HilbertSpace space() const { return make_space(n_atoms, cavity_cutoff, mech_cutoff); }

    int cavity_site() const { return n_atoms; }
    int mech_site() const { return n_atoms + 1; }
};

inline void require_model_space(const ModelParams& p, const HilbertSpace& space) {
    if (space != p.space())
        throw std::invalid_argument("space does not match model parameters");
}

// ------------------------------- Hamiltonian ----------------------------------

inline Operator hamiltonian(const ModelParams& p, const HilbertSpace& space) {
    p.validate();
    require_model_space(p, space);

    const Operator a = annihilator(space, p.cavity_site());
    const Operator b = annihilator(space, p.mech_site());
    const Operator ad = a.adjoint();
    const Operator bd = b.adjoint();

    Operator h = p.delta * (ad * a);
    for (int i = 0; i < p.n_atoms; ++i) {
        const Operator sm = annihilator(space, i);
        const Operator sp = sm.adjoint();
        h = h + p.delta * (sp * sm)
              - p.j_coupling * (sp * a * b + sm * ad * bd)
              + p.omega_pump * (sp + sm);
    }
    return h;
}

// ---------------------------- collapse channels --------------------------------

struct CollapseChannel {
    double rate;
    Operator op;
};

// One channel per atom (kappa, s-_i), then (gamma_c, a), then (gamma_m, b).
// The rates are bare; the dissipator prefactor is applied by the Liouvillian
// builder according to the chosen convention.
inline std::vector<CollapseChannel> collapse_channels(const ModelParams& p,
                                                      const HilbertSpace& space) {
    p.validate();
    require_model_space(p, space);
    std::vector<CollapseChannel> channels;
    channels.reserve(static_cast<std::size_t>(p.n_atoms) + 2);
    for (int i = 0; i < p.n_atoms; ++i)
        channels.push_back({p.kappa, annihilator(space, i)});
    channels.push_back({p.gamma_c, annihilator(space, p.cavity_site())});
    channels.push_back({p.gamma_m, annihilator(space, p.mech_site())});
    return channels;
}

}  // namespace hyrad
