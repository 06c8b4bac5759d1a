// ops.hpp — Sparse operators on a HilbertSpec: ladder and qutrit transition
// operators, tensor embedding, and the shift-structured fast form used by the
// integrators.

#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "catgate/hilbert.hpp"
#include "catgate/state.hpp"

namespace catgate {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

class SparseOperator {
public:
    SparseOperator(HilbertSpec spec, SparseMatrix m) : spec_(std::move(spec)), m_(std::move(m)) {
        if (m_.rows() != spec_.dim() || m_.cols() != spec_.dim())
            throw std::invalid_argument("SparseOperator: shape does not match space dimension");
        m_.prune(Complex(0.0, 0.0));
        m_.makeCompressed();
    }

    static SparseOperator from_triplets(HilbertSpec spec, const std::vector<Triplet>& trips) {
        SparseMatrix m(spec.dim(), spec.dim());
        m.setFromTriplets(trips.begin(), trips.end());
        return SparseOperator(std::move(spec), std::move(m));
    }

    static SparseOperator identity(const HilbertSpec& spec) {
        SparseMatrix m(spec.dim(), spec.dim());
        m.setIdentity();
        return SparseOperator(spec, std::move(m));
    }

    const HilbertSpec& spec() const { return spec_; }
    const SparseMatrix& matrix() const { return m_; }
    std::int64_t dim() const { return m_.rows(); }
    std::int64_t nonzeros() const { return m_.nonZeros(); }

    SparseOperator adjoint() const { return SparseOperator(spec_, SparseMatrix(m_.adjoint())); }

    Matrix dense() const { return Matrix(m_); }

    double hermiticity_residual() const {
        SparseMatrix d = m_ - SparseMatrix(m_.adjoint());
        double r = 0.0;
        for (int k = 0; k < d.outerSize(); ++k)
            for (SparseMatrix::InnerIterator it(d, k); it; ++it) r = std::max(r, std::abs(it.value()));
        return r;
    }

    Vector apply(const Vector& x) const {
        if (x.size() != m_.cols()) throw std::invalid_argument("SparseOperator: vector size mismatch");
        return m_ * x;
    }

    StateVector apply(const StateVector& psi) const {
        if (psi.spec() != spec_) throw std::invalid_argument("SparseOperator: Hilbert-space mismatch");
        return StateVector(spec_, m_ * psi.amplitudes());
    }

    friend SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) {
        if (a.spec_ != b.spec_) throw std::invalid_argument("SparseOperator: Hilbert-space mismatch");
        return SparseOperator(a.spec_, SparseMatrix(a.m_ * b.m_));
    }
    friend SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) {
        if (a.spec_ != b.spec_) throw std::invalid_argument("SparseOperator: Hilbert-space mismatch");
        return SparseOperator(a.spec_, SparseMatrix(a.m_ + b.m_));
    }
    friend SparseOperator operator*(Complex c, const SparseOperator& a) {
        return SparseOperator(a.spec_, SparseMatrix(c * a.m_));
    }

private:
    HilbertSpec spec_;
    SparseMatrix m_;
};

// ---------------------------------------------------------------------------
// Local operator factories (single-mode / bare qutrit)
// ---------------------------------------------------------------------------

/// Photon annihilation operator on one mode: a|n> = sqrt(n)|n-1>, truncated.
inline SparseOperator annihilation(int cutoff) {
    if (cutoff < 1) throw std::invalid_argument("annihilation: cutoff must be >= 1");
    HilbertSpec spec = HilbertSpec::single_mode(cutoff);
    std::vector<Triplet> t;
    t.reserve(static_cast<size_t>(cutoff));
    for (int n = 1; n <= cutoff; ++n)
        t.emplace_back(n - 1, n, Complex(std::sqrt(static_cast<double>(n)), 0.0));
    return SparseOperator::from_triplets(std::move(spec), t);
}

/// Qutrit transition operator |to><from| on the bare three-level system.
/// Returned on a single-slot spec of dimension 3 (a one-cavity spec is not
/// used here; the matrix is 3x3 and meant for embedding at the qutrit slot).
inline Eigen::Matrix3cd qutrit_transition(Level from, Level to) {
    Eigen::Matrix3cd m = Eigen::Matrix3cd::Zero();
    m(static_cast<int>(to), static_cast<int>(from)) = 1.0;
    return m;
}

inline Eigen::Matrix3cd qutrit_transition(char from, char to) {
    return qutrit_transition(level_from_char(from), level_from_char(to));
}

// ---------------------------------------------------------------------------
// Tensor embedding
// ---------------------------------------------------------------------------

/// Subsystem slots of a composite spec: slot 0 is the qutrit, slots 1..n the
/// cavities. Spectator factors are bookkeeping only and not addressable.
inline int slot_factor(const HilbertSpec& spec, int slot) {
    if (!spec.has_qutrit()) throw std::invalid_argument("embed: composite spec required");
    if (slot < 0 || slot > spec.n_cavities()) throw std::out_of_range("embed: slot out of range");
    return spec.n_spectators() + slot;
}

/// Lift a local dense operator acting on one slot to the composite space,
/// identity on every other factor.
inline SparseOperator embed(const Matrix& local, int slot, const HilbertSpec& spec) {
    const int f = slot_factor(spec, slot);
    const int d = spec.factor_dim(f);
    if (local.rows() != d || local.cols() != d)
        throw std::invalid_argument("embed: local operator does not match slot dimension");
    const std::int64_t stride = spec.factor_stride(f);
    const std::int64_t dim = spec.dim();
    std::vector<Triplet> t;
    for (std::int64_t col = 0; col < dim; ++col) {
        const int lc = static_cast<int>((col / stride) % d);
        const std::int64_t base = col - lc * stride;
        for (int lr = 0; lr < d; ++lr) {
            const Complex v = local(lr, lc);
            if (v != Complex(0.0, 0.0)) t.emplace_back(base + lr * stride, col, v);
        }
    }
    return SparseOperator::from_triplets(spec, t);
}

/// Lift a local single-mode sparse operator (e.g. annihilation) to a cavity slot.
inline SparseOperator embed(const SparseOperator& local, int slot, const HilbertSpec& spec) {
    return embed(local.dense(), slot, spec);
}

/// Embedded photon-number operator of cavity j.
inline SparseOperator number_operator(int j, const HilbertSpec& spec) {
    const int d = spec.factor_dim(slot_factor(spec, j));
    Matrix n = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) n(k, k) = static_cast<double>(k);
    return embed(n, j, spec);
}

// ---------------------------------------------------------------------------
// Shift-structured operators (fast path)
// ---------------------------------------------------------------------------

/// Operator of the form O[i, i - offset] = w[i] (one entry per row and per
/// column, real weights). Every coupling and collapse operator of the device
/// model has this shape, which keeps the integrator kernels branch-free.
struct ShiftOp {
    std::int64_t offset = 0;          // row = column + offset
    Eigen::VectorXd weight;           // indexed by row; zero where no entry exists

    std::int64_t dim() const { return weight.size(); }

    /// out += amp * O * x
    void apply(Complex amp, const Complex* x, Complex* out) const {
        const std::int64_t n = dim();
        const std::int64_t lo = std::max<std::int64_t>(0, offset);
        const std::int64_t hi = std::min<std::int64_t>(n, n + offset);
        const double* w = weight.data();
        for (std::int64_t i = lo; i < hi; ++i) out[i] += amp * w[i] * x[i - offset];
    }

    /// out += amp * O^dagger * x  (weights are real, so no conjugation)
    void apply_adjoint(Complex amp, const Complex* x, Complex* out) const {
        const std::int64_t n = dim();
        const std::int64_t lo = std::max<std::int64_t>(0, offset);
        const std::int64_t hi = std::min<std::int64_t>(n, n + offset);
        const double* w = weight.data();
        for (std::int64_t i = lo; i < hi; ++i) out[i - offset] += amp * w[i] * x[i];
    }

    /// Diagonal of O^dagger O (used for decay accounting).
    Eigen::VectorXd gram_diagonal() const {
        Eigen::VectorXd d = Eigen::VectorXd::Zero(dim());
        const std::int64_t n = dim();
        const std::int64_t lo = std::max<std::int64_t>(0, offset);
        const std::int64_t hi = std::min<std::int64_t>(n, n + offset);
        for (std::int64_t i = lo; i < hi; ++i) d[i - offset] = weight[i] * weight[i];
        return d;
    }

    SparseOperator materialize(const HilbertSpec& spec) const {
        if (spec.dim() != dim()) throw std::invalid_argument("ShiftOp: dimension mismatch");
        std::vector<Triplet> t;
        const std::int64_t n = dim();
        const std::int64_t lo = std::max<std::int64_t>(0, offset);
        const std::int64_t hi = std::min<std::int64_t>(n, n + offset);
        for (std::int64_t i = lo; i < hi; ++i)
            if (weight[i] != 0.0) t.emplace_back(i, i - offset, Complex(weight[i], 0.0));
        return SparseOperator::from_triplets(spec, t);
    }
};

/// a_j as a ShiftOp on the composite space.
inline ShiftOp shift_annihilation(int j, const HilbertSpec& spec) {
    const std::int64_t stride = spec.cavity_stride(j);
    ShiftOp op;
    op.offset = -stride;
    op.weight = Eigen::VectorXd::Zero(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        const int n = spec.photon_number_of(i, j);
        if (n < spec.cutoff(j)) op.weight[i] = std::sqrt(static_cast<double>(n + 1));
    }
    return op;
}

/// |to><from| on the qutrit as a ShiftOp on the composite space.
inline ShiftOp shift_qutrit(Level from, Level to, const HilbertSpec& spec) {
    const std::int64_t stride = spec.qutrit_stride();
    ShiftOp op;
    op.offset = (static_cast<int>(to) - static_cast<int>(from)) * stride;
    op.weight = Eigen::VectorXd::Zero(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        if (spec.qutrit_index_of(i) == static_cast<int>(to)) op.weight[i] = 1.0;
    return op;
}

/// Product of two ShiftOps (B applied first): C = A * B, still shift-structured.
inline ShiftOp shift_product(const ShiftOp& a, const ShiftOp& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("shift_product: dimension mismatch");
    ShiftOp c;
    c.offset = a.offset + b.offset;
    c.weight = Eigen::VectorXd::Zero(a.dim());
    const std::int64_t n = a.dim();
    for (std::int64_t i = 0; i < n; ++i) {
        const std::int64_t mid = i - a.offset;
        if (mid < 0 || mid >= n) continue;
        if (a.weight[i] == 0.0) continue;
        c.weight[i] = a.weight[i] * b.weight[mid];
    }
    return c;
}

/// Adjoint of a ShiftOp.
inline ShiftOp shift_adjoint(const ShiftOp& a) {
    ShiftOp c;
    c.offset = -a.offset;
    c.weight = Eigen::VectorXd::Zero(a.dim());
    const std::int64_t n = a.dim();
    const std::int64_t lo = std::max<std::int64_t>(0, a.offset);
    const std::int64_t hi = std::min<std::int64_t>(n, n + a.offset);
    for (std::int64_t i = lo; i < hi; ++i) c.weight[i - a.offset] = a.weight[i];
    return c;
}

}  // namespace catgate
