// liouville.hpp — Superoperator construction, steady-state solver, dressed
// spectra, and a fixed-step time integrator used as a cross-validation oracle.
//
// Density matrices are column-vectorized, so vec(A X B) = (B^T kron A) vec(X).

#pragma once

#include "model.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include <algorithm>
#include <optional>

namespace hyrad {

// ---------------------------------- errors -----------------------------------

struct SolverError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct NonUniqueSteadyState : SolverError {
    using SolverError::SolverError;
};
struct NotConverged : SolverError {
    using SolverError::SolverError;
};
struct StepUnstable : SolverError {
    using SolverError::SolverError;
};

// ------------------------------- DensityMatrix -------------------------------

class DensityMatrix {
public:
    DensityMatrix(HilbertSpace space, DenseMatrix elements)
        : space_(std::move(space)), elements_(std::move(elements)) {
        const long d = space_.total_dim();
        if (elements_.rows() != d || elements_.cols() != d)
            throw std::invalid_argument("DensityMatrix: shape does not match space");
    }

    static DensityMatrix pure(const HilbertSpace& space, const DenseVector& psi) {
        if (psi.size() != space.total_dim())
            throw std::invalid_argument("DensityMatrix::pure: state dimension mismatch");
        const double nrm = psi.norm();
        if (nrm == 0.0) throw std::invalid_argument("DensityMatrix::pure: zero state");
        DenseVector u = psi / nrm;
        return DensityMatrix(space, u * u.adjoint());
    }

    // |0...0><0...0|
    static DensityMatrix vacuum(const HilbertSpace& space) {
        DenseVector psi = DenseVector::Zero(space.total_dim());
        psi(0) = 1.0;
        return pure(space, psi);
    }

    const HilbertSpace& space() const { return space_; }
    const DenseMatrix& elements() const { return elements_; }

    double trace_real() const { return elements_.trace().real(); }
    double hermiticity_defect() const {
        return (elements_ - elements_.adjoint()).cwiseAbs().maxCoeff();
    }
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(elements_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

    // Throws when the state violates Hermiticity, normalization or positivity.
    void check_valid(double herm_tol = 1e-10, double trace_tol = 1e-10,
                     double eig_floor = -1e-8) const {
        if (hermiticity_defect() > herm_tol)
            throw std::runtime_error("DensityMatrix: not Hermitian");
        if (std::abs(trace_real() - 1.0) > trace_tol)
            throw std::runtime_error("DensityMatrix: trace != 1");
        if (min_eigenvalue() < eig_floor)
            throw std::runtime_error("DensityMatrix: negative eigenvalue");
    }

    // 1/2 * trace norm of the difference.
    double trace_distance(const DensityMatrix& other) const {
        if (space_ != other.space_)
            throw std::invalid_argument("trace_distance: space mismatch");
        DenseMatrix diff = elements_ - other.elements_;
        Eigen::SelfAdjointEigenSolver<DenseMatrix> es(0.5 * (diff + diff.adjoint()),
                                                      Eigen::EigenvaluesOnly);
        return 0.5 * es.eigenvalues().cwiseAbs().sum();
    }

private:
    HilbertSpace space_;
    DenseMatrix elements_;
};

// -------------------------------- vectorization -------------------------------

inline DenseVector vectorize(const DenseMatrix& m) {
    return Eigen::Map<const DenseVector>(m.data(), m.size());
}

inline DenseMatrix unvectorize(const DenseVector& v, long d) {
    if (v.size() != d * d) throw std::invalid_argument("unvectorize: size mismatch");
    return Eigen::Map<const DenseMatrix>(v.data(), d, d);
}

// -------------------------------- Superoperator -------------------------------

class Superoperator {
public:
    Superoperator(HilbertSpace space, SparseMatrix matrix)
        : space_(std::move(space)), mat_(std::move(matrix)) {
        const long n = space_.total_dim() * space_.total_dim();
        if (mat_.rows() != n || mat_.cols() != n)
            throw std::invalid_argument("Superoperator: matrix must be d^2 x d^2");
    }

    const HilbertSpace& space() const { return space_; }
    const SparseMatrix& matrix() const { return mat_; }

    double max_abs() const {
        double m = 0.0;
        for (int k = 0; k < mat_.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(mat_, k); it; ++it)
                m = std::max(m, std::abs(it.value()));
        return m;
    }

    // d rho / dt for the given state (the result is not itself a state).
    DenseMatrix apply(const DensityMatrix& rho) const {
        if (rho.space() != space_) throw std::invalid_argument("Superoperator::apply: space mismatch");
        return unvectorize(mat_ * vectorize(rho.elements()), space_.total_dim());
    }

    // max_c |sum over trace-row entries of column c|; zero for a
    // trace-preserving generator.
    double trace_preservation_defect() const {
        const long d = space_.total_dim();
        Eigen::VectorXcd colsum = Eigen::VectorXcd::Zero(mat_.cols());
        for (int k = 0; k < mat_.outerSize(); ++k) {
            for (SparseMatrix::InnerIterator it(mat_, k); it; ++it) {
                const long r = it.row();
                if (r % (d + 1) == 0) colsum(it.col()) += it.value();
            }
        }
        return colsum.cwiseAbs().maxCoeff();
    }

private:
    HilbertSpace space_;
    SparseMatrix mat_;
};

// L vec(rho) = vec(-i[H, rho] + sum_k pref * rate_k (2 c rho c† - {c†c, rho}))
// with pref = 1 (paper convention) or 1/2 (standard).
inline Superoperator build_liouvillian(const Operator& h,
                                       const std::vector<CollapseChannel>& channels,
                                       DissipatorConvention convention = DissipatorConvention::paper) {
    const HilbertSpace& space = h.space();
    const long d = space.total_dim();
    SparseMatrix ident(d, d);
    ident.setIdentity();

    const cplx i_unit(0.0, 1.0);
    const SparseMatrix& hm = h.matrix();
    SparseMatrix lio = -i_unit * (kron_sparse(ident, hm) -
                                  kron_sparse(SparseMatrix(hm.transpose()), ident));

    const double pref = convention == DissipatorConvention::paper ? 1.0 : 0.5;
    for (const auto& ch : channels) {
        if (ch.op.space() != space)
            throw std::invalid_argument("build_liouvillian: channel space mismatch");
        if (ch.rate < 0) throw std::invalid_argument("build_liouvillian: negative rate");
        const SparseMatrix& c = ch.op.matrix();
        SparseMatrix cdc = SparseMatrix(c.adjoint()) * c;
        lio = lio + (pref * ch.rate) *
                        (2.0 * kron_sparse(SparseMatrix(c.conjugate()), c) -
                         kron_sparse(ident, cdc) -
                         kron_sparse(SparseMatrix(cdc.transpose()), ident));
    }
    lio.makeCompressed();
    return Superoperator(space, std::move(lio));
}

inline Superoperator build_liouvillian(const ModelParams& p,
                                       DissipatorConvention convention = DissipatorConvention::paper) {
    const HilbertSpace space = p.space();
    return build_liouvillian(hamiltonian(p, space), collapse_channels(p, space), convention);
}

// -------------------------------- steady state --------------------------------

struct SteadyStateOptions {
    enum class Method { direct_lu, iterative };
    Method method = Method::direct_lu;
    // One pass of iterative refinement on the constrained system.
    int refine_passes = 1;
    // Residual gate (relative to the largest Liouvillian entry) beyond which
    // the constrained solve is declared numerically singular.
    double singular_tol = 1e-6;
    // Re-solve with a different constrained row and compare, to detect a
    // degenerate kernel.
    bool verify_uniqueness = false;
    int max_iterations = 20000;       // iterative method only
    double iterative_tol = 1e-12;     // iterative method only
};

struct SteadyStateResult {
    DensityMatrix rho;
    double residual;  // max abs of L vec(rho) after normalization
};

namespace detail {

// Constrained system: the row of the population equation with the largest
// diagonal magnitude is replaced by the trace constraint. Only replacing a
// population row removes the generator's single row dependency (the trace
// functional is supported on those rows alone).
inline long trace_row_index(const SparseMatrix& lio, long d, int rank_choice = 0) {
    Eigen::VectorXd diag_mag(d);
    for (long i = 0; i < d; ++i) {
        const long k = i * (d + 1);
        diag_mag(i) = std::abs(lio.coeff(k, k));
    }
    std::vector<long> order(static_cast<std::size_t>(d));
    std::iota(order.begin(), order.end(), 0L);
    std::nth_element(order.begin(), order.begin() + rank_choice, order.end(),
                     [&](long a, long b) { return diag_mag(a) > diag_mag(b); });
    return order[static_cast<std::size_t>(rank_choice)] * (d + 1);
}

inline SparseMatrix with_trace_row(const SparseMatrix& lio, long d, long row) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(lio.nonZeros()) + static_cast<std::size_t>(d));
    for (int k = 0; k < lio.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(lio, k); it; ++it)
            if (it.row() != row)
                trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), it.value());
    for (long i = 0; i < d; ++i)
        trips.emplace_back(static_cast<int>(row), static_cast<int>(i * (d + 1)), cplx(1.0, 0.0));
    SparseMatrix m(lio.rows(), lio.cols());
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

inline DenseVector solve_constrained(const SparseMatrix& constrained, const DenseVector& rhs,
                                     const SteadyStateOptions& opt) {
    if (opt.method == SteadyStateOptions::Method::direct_lu) {
        Eigen::SparseLU<SparseMatrix> lu;
        lu.compute(constrained);
        if (lu.info() != Eigen::Success)
            throw NonUniqueSteadyState("steady_state: LU factorization failed "
                                       "(constrained system is singular)");
        DenseVector x = lu.solve(rhs);
        for (int pass = 0; pass < opt.refine_passes; ++pass) {
            DenseVector r = rhs - constrained * x;
            x += lu.solve(r);
        }
        return x;
    }
    Eigen::BiCGSTAB<SparseMatrix, Eigen::IncompleteLUT<cplx>> solver;
    solver.setMaxIterations(opt.max_iterations);
    solver.setTolerance(opt.iterative_tol);
    solver.compute(constrained);
    if (solver.info() != Eigen::Success)
        throw NonUniqueSteadyState("steady_state: iterative preconditioner failed");
    DenseVector x = solver.solve(rhs);
    if (solver.info() != Eigen::Success)
        throw NotConverged("steady_state: iterative solver did not converge");
    return x;
}

inline DensityMatrix density_from_solution(const HilbertSpace& space, const DenseVector& x) {
    const long d = space.total_dim();
    DenseMatrix rho = unvectorize(x, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-300)
        throw NonUniqueSteadyState("steady_state: solution has vanishing trace");
    rho /= tr;
    return DensityMatrix(space, std::move(rho));
}

}  // namespace detail

// Solves L vec(rho) = 0 with trace(rho) = 1 by a constrained direct solve.
inline SteadyStateResult steady_state(const Superoperator& lio,
                                      const SteadyStateOptions& opt = {}) {
    const HilbertSpace& space = lio.space();
    const long d = space.total_dim();
    const long n = d * d;
    const SparseMatrix& lmat = lio.matrix();

    const long row = detail::trace_row_index(lmat, d, 0);
    SparseMatrix constrained = detail::with_trace_row(lmat, d, row);
    DenseVector rhs = DenseVector::Zero(n);
    rhs(row) = 1.0;

    DenseVector x = detail::solve_constrained(constrained, rhs, opt);
    DensityMatrix rho = detail::density_from_solution(space, x);

    const double scale = lio.max_abs();
    const double residual = (lmat * vectorize(rho.elements())).cwiseAbs().maxCoeff();
    if (!(residual <= opt.singular_tol * std::max(scale, 1.0)))
        throw NonUniqueSteadyState("steady_state: residual " + std::to_string(residual) +
                                   " indicates a numerically singular constrained system");

    if (opt.verify_uniqueness) {
        const long row2 = detail::trace_row_index(lmat, d, d > 1 ? 1 : 0);
        SparseMatrix constrained2 = detail::with_trace_row(lmat, d, row2);
        DenseVector rhs2 = DenseVector::Zero(n);
        rhs2(row2) = 1.0;
        DensityMatrix rho2 =
            detail::density_from_solution(space, detail::solve_constrained(constrained2, rhs2, opt));
        if (rho.trace_distance(rho2) > 1e-8)
            throw NonUniqueSteadyState("steady_state: solutions from independent row "
                                       "replacements disagree (degenerate steady state)");
    }
    return {std::move(rho), residual};
}

// --------------------------------- evolve -------------------------------------

// Fixed-step RK4 on vec(rho). Test oracle, not a product feature: dt must
// satisfy dt <= 0.01 / max(rates, |H| scale) (or at least keep |lambda dt|
// inside the RK4 stability region); the trace is renormalized every step and
// a drift above 1e-6 per step aborts.
inline DensityMatrix evolve(const DensityMatrix& rho0, const Superoperator& lio,
                            double t_final, double dt) {
    if (rho0.space() != lio.space()) throw std::invalid_argument("evolve: space mismatch");
    if (dt <= 0 || t_final < 0) throw std::invalid_argument("evolve: nonpositive step or time");

    const long d = lio.space().total_dim();
    const SparseMatrix& l = lio.matrix();
    DenseVector v = vectorize(rho0.elements());

    auto trace_of = [d](const DenseVector& w) {
        cplx tr(0.0, 0.0);
        for (long i = 0; i < d; ++i) tr += w(i * (d + 1));
        return tr;
    };

    const long steps = static_cast<long>(std::ceil(t_final / dt));
    for (long s = 0; s < steps; ++s) {
        const double h = std::min(dt, t_final - static_cast<double>(s) * dt);
        DenseVector k1 = l * v;
        DenseVector k2 = l * (v + 0.5 * h * k1);
        DenseVector k3 = l * (v + 0.5 * h * k2);
        DenseVector k4 = l * (v + h * k3);
        v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);

        const cplx tr = trace_of(v);
        const double drift = std::abs(tr - cplx(1.0, 0.0));
        if (!(drift <= 1e-6))  // also trips on NaN after a blow-up
            throw StepUnstable("evolve: trace drift " + std::to_string(drift) +
                               " per step exceeds 1e-6; reduce dt");
        v /= tr;
    }
    DenseMatrix rho = unvectorize(v, d);
    rho = 0.5 * (rho + rho.adjoint().eval());
    return DensityMatrix(lio.space(), std::move(rho));
}

// ------------------------------ dressed spectra --------------------------------

struct EigenPair {
    double value;
    DenseVector vector;
};

// Full Hermitian eigendecomposition of the pump-free Hamiltonian, ascending.
inline std::vector<EigenPair> dressed_spectrum(const ModelParams& p, const HilbertSpace& space) {
    if (p.omega_pump != 0.0)
        throw std::invalid_argument("dressed_spectrum: requires omega_pump = 0");
    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(hamiltonian(p, space).dense());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("dressed_spectrum: eigensolver failed");
    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(space.total_dim()));
    for (long i = 0; i < space.total_dim(); ++i)
        pairs.push_back({es.eigenvalues()(i), es.eigenvectors().col(i)});
    return pairs;
}

// Basis indices spanning the one-excitation manifold: all atoms in g with
// boson occupations in {00, 10, 01, 11}, plus one atom excited with bosons
// in vacuum.
inline std::vector<long> one_excitation_basis(const HilbertSpace& space) {
    const int n_atoms = space.sites() - 2;
    std::vector<long> idx;
    std::vector<int> lv(static_cast<std::size_t>(space.sites()), 0);
    for (int c = 0; c <= 1; ++c)
        for (int m = 0; m <= 1; ++m) {
            lv[static_cast<std::size_t>(n_atoms)] = c;
            lv[static_cast<std::size_t>(n_atoms) + 1] = m;
            idx.push_back(basis_index(space, lv));
        }
    lv[static_cast<std::size_t>(n_atoms)] = 0;
    lv[static_cast<std::size_t>(n_atoms) + 1] = 0;
    for (int i = 0; i < n_atoms; ++i) {
        lv[static_cast<std::size_t>(i)] = 1;
        idx.push_back(basis_index(space, lv));
        lv[static_cast<std::size_t>(i)] = 0;
    }
    std::sort(idx.begin(), idx.end());
    return idx;
}

// Eigenpairs restricted to the one-excitation manifold. The manifold spans an
// invariant subspace of the pump-free Hamiltonian, so diagonalizing the
// restriction yields exact full-space eigenpairs and keeps degenerate levels
// from mixing with states outside the manifold.
inline std::vector<EigenPair> one_excitation_manifold(const ModelParams& p,
                                                      const HilbertSpace& space) {
    if (p.omega_pump != 0.0)
        throw std::invalid_argument("one_excitation_manifold: requires omega_pump = 0");
    const std::vector<long> idx = one_excitation_basis(space);
    const int k = static_cast<int>(idx.size());
    const DenseMatrix h = hamiltonian(p, space).dense();

    DenseMatrix block(k, k);
    for (int r = 0; r < k; ++r)
        for (int c = 0; c < k; ++c)
            block(r, c) = h(idx[static_cast<std::size_t>(r)], idx[static_cast<std::size_t>(c)]);

    Eigen::SelfAdjointEigenSolver<DenseMatrix> es(block);
    if (es.info() != Eigen::Success)
        throw std::runtime_error("one_excitation_manifold: eigensolver failed");

    std::vector<EigenPair> pairs;
    pairs.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        DenseVector full = DenseVector::Zero(space.total_dim());
        for (int r = 0; r < k; ++r) full(idx[static_cast<std::size_t>(r)]) = es.eigenvectors()(r, i);
        pairs.push_back({es.eigenvalues()(i), std::move(full)});
    }
    return pairs;
}

// Splitting of the two dressed levels carrying the photon-phonon pair state
// |g..g 1 1>: 2J for one atom, 2*sqrt(2)*J for two. Zero when no level
// couples to the pair state (J = 0 leaves it an eigenstate on its own).
inline double bright_pair_splitting(const ModelParams& p) {
    ModelParams q = p;
    q.omega_pump = 0.0;
    const HilbertSpace space = q.space();
    std::vector<int> lv(static_cast<std::size_t>(space.sites()), 0);
    lv[static_cast<std::size_t>(q.cavity_site())] = 1;
    lv[static_cast<std::size_t>(q.mech_site())] = 1;
    const long pair_idx = basis_index(space, lv);

    double lo = 0.0, hi = 0.0;
    bool first = true;
    for (const auto& ep : one_excitation_manifold(q, space)) {
        if (std::norm(ep.vector(pair_idx)) < 1e-12) continue;
        if (first) {
            lo = hi = ep.value;
            first = false;
        } else {
            lo = std::min(lo, ep.value);
            hi = std::max(hi, ep.value);
        }
    }
    return hi - lo;
}

}  // namespace hyrad
