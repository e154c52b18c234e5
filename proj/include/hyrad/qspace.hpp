// qspace.hpp — Composite Hilbert spaces and sparse complex operator algebra.
//
// Subsystem ordering is fixed as atoms first, then cavity, then mechanical
// mode; the first factor is the most significant index block (Kronecker
// order), so a basis index decomposes as |x y c d> for two atoms.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace hyrad {

using cplx = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using DenseVector = Eigen::VectorXcd;
using SparseMatrix = Eigen::SparseMatrix<cplx>;
using Triplet = Eigen::Triplet<cplx>;

// --------------------------------- HilbertSpace -----------------------------

// Ordered list of subsystem dimensions. Immutable after construction.
class HilbertSpace {
public:
    explicit HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw std::invalid_argument("HilbertSpace: no subsystems");
        total_ = 1;
        for (int d : dims_) {
            if (d < 2) throw std::invalid_argument("HilbertSpace: local dimension must be >= 2");
            total_ *= d;
        }
    }

    int sites() const { return static_cast<int>(dims_.size()); }
    int dim(int site) const { return dims_.at(static_cast<std::size_t>(site)); }
    const std::vector<int>& dims() const { return dims_; }
    long total_dim() const { return total_; }

    // Product of dimensions strictly before / after a site.
    long dim_before(int site) const {
        check_site(site);
        long p = 1;
        for (int s = 0; s < site; ++s) p *= dims_[static_cast<std::size_t>(s)];
        return p;
    }
    long dim_after(int site) const {
        check_site(site);
        long p = 1;
        for (int s = site + 1; s < sites(); ++s) p *= dims_[static_cast<std::size_t>(s)];
        return p;
    }

    bool operator==(const HilbertSpace& o) const { return dims_ == o.dims_; }
    bool operator!=(const HilbertSpace& o) const { return !(*this == o); }

private:
    void check_site(int site) const {
        if (site < 0 || site >= sites()) throw std::out_of_range("HilbertSpace: site out of range");
    }

    std::vector<int> dims_;
    long total_ = 0;
};

// Basis index of the product state with the given per-site levels.
inline long basis_index(const HilbertSpace& space, const std::vector<int>& levels) {
    if (static_cast<int>(levels.size()) != space.sites())
        throw std::invalid_argument("basis_index: wrong number of levels");
    long idx = 0;
    for (int s = 0; s < space.sites(); ++s) {
        if (levels[static_cast<std::size_t>(s)] < 0 ||
            levels[static_cast<std::size_t>(s)] >= space.dim(s))
            throw std::out_of_range("basis_index: level out of range");
        idx = idx * space.dim(s) + levels[static_cast<std::size_t>(s)];
    }
    return idx;
}

// Space for n_atoms qubits, a cavity mode truncated at cavity_cutoff and a
// mechanical mode truncated at mech_cutoff: dims [2,..,Nc+1,Nm+1].
inline HilbertSpace make_space(int n_atoms, int cavity_cutoff, int mech_cutoff) {
    if (n_atoms != 1 && n_atoms != 2)
        throw std::invalid_argument("make_space: n_atoms must be 1 or 2");
    if (cavity_cutoff < 1 || mech_cutoff < 1)
        throw std::invalid_argument("make_space: Fock cutoffs must be >= 1");
    std::vector<int> dims(static_cast<std::size_t>(n_atoms), 2);
    dims.push_back(cavity_cutoff + 1);
    dims.push_back(mech_cutoff + 1);
    return HilbertSpace(std::move(dims));
}

// ---------------------------------- local ops -------------------------------

// Truncated bosonic lowering operator: A[k-1,k] = sqrt(k). For local_dim 2
// this is the qubit sigma_minus in the {g=0, e=1} ordering.
inline DenseMatrix ladder(int local_dim) {
    if (local_dim < 2) throw std::invalid_argument("ladder: local_dim must be >= 2");
    DenseMatrix m = DenseMatrix::Zero(local_dim, local_dim);
    for (int k = 1; k < local_dim; ++k) m(k - 1, k) = std::sqrt(static_cast<double>(k));
    return m;
}

// ---------------------------------- Operator --------------------------------

// Full-space operator. Storage is sparse throughout; dense() converts on
// demand for eigensolvers and small-space work.
class Operator {
public:
    Operator(HilbertSpace space, SparseMatrix mat)
        : space_(std::move(space)), mat_(std::move(mat)) {
        const long d = space_.total_dim();
        if (mat_.rows() != d || mat_.cols() != d)
            throw std::invalid_argument("Operator: matrix shape does not match space");
    }

    static Operator identity(const HilbertSpace& space) {
        SparseMatrix m(space.total_dim(), space.total_dim());
        m.setIdentity();
        return Operator(space, std::move(m));
    }

    static Operator zero(const HilbertSpace& space) {
        return Operator(space, SparseMatrix(space.total_dim(), space.total_dim()));
    }

    const HilbertSpace& space() const { return space_; }
    const SparseMatrix& matrix() const { return mat_; }
    DenseMatrix dense() const { return DenseMatrix(mat_); }

    Operator adjoint() const { return Operator(space_, SparseMatrix(mat_.adjoint())); }

    double max_abs() const {
        double m = 0.0;
        for (int k = 0; k < mat_.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(mat_, k); it; ++it)
                m = std::max(m, std::abs(it.value()));
        return m;
    }

    friend Operator operator+(const Operator& a, const Operator& b) {
        require_same_space(a, b, "operator+");
        return Operator(a.space_, SparseMatrix(a.mat_ + b.mat_));
    }
    friend Operator operator-(const Operator& a, const Operator& b) {
        require_same_space(a, b, "operator-");
        return Operator(a.space_, SparseMatrix(a.mat_ - b.mat_));
    }
    friend Operator operator*(const Operator& a, const Operator& b) {
        require_same_space(a, b, "operator*");
        return Operator(a.space_, SparseMatrix(a.mat_ * b.mat_));
    }
    friend Operator operator*(cplx s, const Operator& a) {
        return Operator(a.space_, SparseMatrix(s * a.mat_));
    }
    friend Operator operator*(double s, const Operator& a) { return cplx(s, 0.0) * a; }
    friend Operator operator*(const Operator& a, cplx s) { return s * a; }
    friend Operator operator*(const Operator& a, double s) { return s * a; }
    Operator operator-() const { return cplx(-1.0, 0.0) * *this; }

private:
    static void require_same_space(const Operator& a, const Operator& b, const char* what) {
        if (a.space_ != b.space_)
            throw std::invalid_argument(std::string(what) + ": operator spaces differ");
    }

    HilbertSpace space_;
    SparseMatrix mat_;
};

// Commutator [A, B].
inline Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

// ----------------------------------- embed ----------------------------------

// Dilate a local operator to the full space: I (x) ... (x) op (x) ... (x) I.
inline Operator embed(const HilbertSpace& space, int site, const DenseMatrix& local_op) {
    if (site < 0 || site >= space.sites())
        throw std::out_of_range("embed: site out of range");
    const int ds = space.dim(site);
    if (local_op.rows() != ds || local_op.cols() != ds)
        throw std::invalid_argument("embed: local operator does not match site dimension");

    const long left = space.dim_before(site);
    const long right = space.dim_after(site);

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(local_op.size()) * static_cast<std::size_t>(left * right));
    for (long l = 0; l < left; ++l) {
        for (int r = 0; r < ds; ++r) {
            for (int c = 0; c < ds; ++c) {
                const cplx v = local_op(r, c);
                if (v == cplx(0.0, 0.0)) continue;
                const long row0 = (l * ds + r) * right;
                const long col0 = (l * ds + c) * right;
                for (long k = 0; k < right; ++k)
                    trips.emplace_back(static_cast<int>(row0 + k), static_cast<int>(col0 + k), v);
            }
        }
    }
    SparseMatrix m(space.total_dim(), space.total_dim());
    m.setFromTriplets(trips.begin(), trips.end());
    return Operator(space, std::move(m));
}

// Lowering operator of the given site, dilated to the full space.
inline Operator annihilator(const HilbertSpace& space, int site) {
    return embed(space, site, ladder(space.dim(site)));
}

// Sparse Kronecker product (used by the superoperator construction).
inline SparseMatrix kron_sparse(const SparseMatrix& a, const SparseMatrix& b) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(a.nonZeros()) * static_cast<std::size_t>(b.nonZeros()));
    const long br = b.rows(), bc = b.cols();
    for (int ka = 0; ka < a.outerSize(); ++ka) {
        for (SparseMatrix::InnerIterator ia(a, ka); ia; ++ia) {
            for (int kb = 0; kb < b.outerSize(); ++kb) {
                for (SparseMatrix::InnerIterator ib(b, kb); ib; ++ib) {
                    trips.emplace_back(static_cast<int>(ia.row() * br + ib.row()),
                                       static_cast<int>(ia.col() * bc + ib.col()),
                                       ia.value() * ib.value());
                }
            }
        }
    }
    SparseMatrix out(a.rows() * br, a.cols() * bc);
    out.setFromTriplets(trips.begin(), trips.end());
    return out;
}

}  // namespace hyrad
