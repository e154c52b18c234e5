// observables.hpp — Scalar quantities computed from a steady-state density
// matrix: occupations, second-order correlations, logarithmic negativity,
// and the radiance witness.

#pragma once

#include "liouville.hpp"

#include <optional>

namespace hyrad {

struct HermitianExpectationComplex : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Correlations at occupations below this floor are flagged undefined instead
// of dividing by ~0.
inline constexpr double k_occupation_floor = 1e-12;

// Denominator floor for the radiance witness.
inline constexpr double k_radiance_floor = 1e-14;

// ------------------------------- expectations ---------------------------------

inline cplx expectation(const Operator& op, const DensityMatrix& rho) {
    if (op.space() != rho.space())
        throw std::invalid_argument("expectation: space mismatch");
    return (op.matrix() * rho.elements()).trace();
}

// Expectation of a Hermitian observable; a residual imaginary part above
// 1e-10 means the inputs were not what the caller claimed.
inline double real_expectation(const Operator& op, const DensityMatrix& rho) {
    const cplx v = expectation(op, rho);
    if (std::abs(v.imag()) > 1e-10)
        throw HermitianExpectationComplex("real_expectation: imaginary part " +
                                          std::to_string(v.imag()));
    return v.real();
}

// ------------------------------- correlations ---------------------------------

enum class BosonMode { photon, phonon };

// Bosonic site index under the atoms..cavity..mechanical layout.
inline int boson_site(const HilbertSpace& space, BosonMode mode) {
    if (space.sites() < 2)
        throw std::invalid_argument("boson_site: space has no bosonic factors");
    return mode == BosonMode::photon ? space.sites() - 2 : space.sites() - 1;
}

// g2(0) = <c†c†cc> / <c†c>^2; undefined below the occupation floor.
inline std::optional<double> g2_auto(const DensityMatrix& rho, BosonMode mode) {
    const HilbertSpace& space = rho.space();
    const Operator c = annihilator(space, boson_site(space, mode));
    const Operator cd = c.adjoint();
    const double occ = real_expectation(cd * c, rho);
    if (occ < k_occupation_floor) return std::nullopt;
    return real_expectation(cd * cd * c * c, rho) / (occ * occ);
}

// g2_nm(0) = <a†b†ba> / (<a†a><b†b>); undefined when either occupation is
// below the floor.
inline std::optional<double> g2_cross(const DensityMatrix& rho) {
    const HilbertSpace& space = rho.space();
    const Operator a = annihilator(space, boson_site(space, BosonMode::photon));
    const Operator b = annihilator(space, boson_site(space, BosonMode::phonon));
    const Operator ad = a.adjoint();
    const Operator bd = b.adjoint();
    const double n = real_expectation(ad * a, rho);
    const double m = real_expectation(bd * b, rho);
    if (n < k_occupation_floor || m < k_occupation_floor) return std::nullopt;
    return real_expectation(ad * bd * b * a, rho) / (n * m);
}

// ------------------------------- partial trace ---------------------------------

// Reduced state on the kept factors (ascending site order preserved).
inline DensityMatrix partial_trace(const DensityMatrix& rho, std::vector<int> keep) {
    const HilbertSpace& space = rho.space();
    if (keep.empty()) throw std::invalid_argument("partial_trace: keep set is empty");
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end())
        throw std::invalid_argument("partial_trace: duplicate site index");
    for (int s : keep)
        if (s < 0 || s >= space.sites())
            throw std::out_of_range("partial_trace: site index out of range");

    std::vector<int> traced;
    for (int s = 0; s < space.sites(); ++s)
        if (!std::binary_search(keep.begin(), keep.end(), s)) traced.push_back(s);

    // Strides of each site in the flattened index.
    std::vector<long> stride(static_cast<std::size_t>(space.sites()), 1);
    for (int s = space.sites() - 2; s >= 0; --s)
        stride[static_cast<std::size_t>(s)] =
            stride[static_cast<std::size_t>(s) + 1] * space.dim(s + 1);

    std::vector<int> kept_dims;
    long dk = 1;
    for (int s : keep) {
        kept_dims.push_back(space.dim(s));
        dk *= space.dim(s);
    }
    long dt = 1;
    for (int s : traced) dt *= space.dim(s);

    auto offset = [&](const std::vector<int>& sites, long flat) {
        long off = 0;
        for (auto it = sites.rbegin(); it != sites.rend(); ++it) {
            const int d = space.dim(*it);
            off += (flat % d) * stride[static_cast<std::size_t>(*it)];
            flat /= d;
        }
        return off;
    };

    std::vector<long> kept_off(static_cast<std::size_t>(dk));
    for (long i = 0; i < dk; ++i) kept_off[static_cast<std::size_t>(i)] = offset(keep, i);
    std::vector<long> traced_off(static_cast<std::size_t>(dt));
    for (long t = 0; t < dt; ++t) traced_off[static_cast<std::size_t>(t)] = offset(traced, t);

    const DenseMatrix& full = rho.elements();
    DenseMatrix out = DenseMatrix::Zero(dk, dk);
    for (long i = 0; i < dk; ++i)
        for (long j = 0; j < dk; ++j) {
            cplx sum(0.0, 0.0);
            for (long t = 0; t < dt; ++t)
                sum += full(kept_off[static_cast<std::size_t>(i)] + traced_off[static_cast<std::size_t>(t)],
                            kept_off[static_cast<std::size_t>(j)] + traced_off[static_cast<std::size_t>(t)]);
            out(i, j) = sum;
        }
    return DensityMatrix(HilbertSpace(std::move(kept_dims)), std::move(out));
}

// ----------------------------- logarithmic negativity ---------------------------

enum class TransposedMode { photon, phonon };

// E_N = log2 of the trace norm of the photon-phonon reduced state, partially
// transposed over the chosen mode. The partial transpose of a Hermitian
// matrix is Hermitian, so the trace norm is the sum of |eigenvalues|.
// Computed values within 1e-10 of zero collapse to exactly 0.
inline double log_negativity(const DensityMatrix& rho,
                             TransposedMode transposed = TransposedMode::photon) {
    const HilbertSpace& space = rho.space();
    if (space.sites() < 2)
        throw std::invalid_argument("log_negativity: space has no bosonic factors");

    DensityMatrix reduced =
        space.sites() == 2
            ? rho
            : partial_trace(rho, {space.sites() - 2, space.sites() - 1});
    const int dc = reduced.space().dim(0);
    const int dm = reduced.space().dim(1);
    const DenseMatrix& r = reduced.elements();

    DenseMatrix pt(dc * dm, dc * dm);
    for (int p = 0; p < dc; ++p)
        for (int q = 0; q < dm; ++q)
            for (int pp = 0; pp < dc; ++pp)
                for (int qq = 0; qq < dm; ++qq) {
                    // swap the transposed mode's row/column indices
                    const long row = transposed == TransposedMode::photon
                                         ? static_cast<long>(pp) * dm + q
                                         : static_cast<long>(p) * dm + qq;
                    const long col = transposed == TransposedMode::photon
                                         ? static_cast<long>(p) * dm + qq
                                         : static_cast<long>(pp) * dm + q;
                    pt(static_cast<long>(p) * dm + q, static_cast<long>(pp) * dm + qq) = r(row, col);
                }

    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(pt, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("log_negativity: eigensolver failed");
    const double en = std::log2(es.eigenvalues().cwiseAbs().sum());
    if (std::abs(en) <= 1e-10) return 0.0;
    return en;
}

// -------------------------------- radiance -------------------------------------

// R = (<n>_2 - 2<n>_1) / (2<n>_1); undefined when the one-atom mean vanishes.
inline std::optional<double> radiance(double mean_photon_two_atom, double mean_photon_one_atom) {
    if (!(mean_photon_one_atom > k_radiance_floor)) return std::nullopt;
    return (mean_photon_two_atom - 2.0 * mean_photon_one_atom) / (2.0 * mean_photon_one_atom);
}

// R < 0 subradiance, R > 1 hyperradiance, else superradiance (the R = 0 and
// R = 1 boundaries fold into the middle band).
inline std::string classify_radiance(std::optional<double> r) {
    if (!r) return "undefined";
    if (*r < 0.0) return "subradiance";
    if (*r > 1.0) return "hyperradiance";
    return "superradiance";
}

// ------------------------------- ObservableSet ---------------------------------

struct ObservableSet {
    double mean_photon = 0.0;
    double mean_phonon = 0.0;
    std::optional<double> g2_photon;
    std::optional<double> g2_phonon;
    std::optional<double> g2_cross;
    double log_negativity = 0.0;
    double solver_residual = 0.0;
    int cavity_cutoff = 0;
    int mech_cutoff = 0;
};

// Full observable set of a steady state on a model space.
inline ObservableSet compute_observables(const DensityMatrix& rho, double solver_residual = 0.0) {
    const HilbertSpace& space = rho.space();
    ObservableSet obs;
    const Operator a = annihilator(space, boson_site(space, BosonMode::photon));
    const Operator b = annihilator(space, boson_site(space, BosonMode::phonon));
    obs.mean_photon = real_expectation(a.adjoint() * a, rho);
    obs.mean_phonon = real_expectation(b.adjoint() * b, rho);
    obs.g2_photon = g2_auto(rho, BosonMode::photon);
    obs.g2_phonon = g2_auto(rho, BosonMode::phonon);
    obs.g2_cross = hyrad::g2_cross(rho);
    obs.log_negativity = hyrad::log_negativity(rho);
    obs.solver_residual = solver_residual;
    obs.cavity_cutoff = space.dim(space.sites() - 2) - 1;
    obs.mech_cutoff = space.dim(space.sites() - 1) - 1;
    return obs;
}

}  // namespace hyrad
