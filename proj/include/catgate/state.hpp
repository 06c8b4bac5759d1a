// state.hpp — State vectors and density matrices on a HilbertSpec, the
// coherent/cat state factories, overlaps, fidelity, and partial traces.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>

#include "catgate/hilbert.hpp"

namespace catgate {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

/// Default tolerance for norm/trace checks on constructed states.
inline constexpr double kStateNormTol = 1e-8;

class StateVector {
public:
    StateVector(HilbertSpec spec, Vector amplitudes)
        : spec_(std::move(spec)), amp_(std::move(amplitudes)) {
        if (amp_.size() != spec_.dim())
            throw std::invalid_argument("StateVector: amplitude length does not match space dimension");
    }

    /// Normalizing constructor.
    static StateVector normalized(HilbertSpec spec, Vector amplitudes) {
        StateVector s(std::move(spec), std::move(amplitudes));
        const double n = s.norm();
        if (n == 0.0) throw std::invalid_argument("StateVector: cannot normalize the zero vector");
        s.amp_ /= n;
        return s;
    }

    const HilbertSpec& spec() const { return spec_; }
    const Vector& amplitudes() const { return amp_; }
    Vector& amplitudes() { return amp_; }
    std::int64_t dim() const { return amp_.size(); }

    double norm() const { return amp_.norm(); }

    Complex overlap(const StateVector& other) const {
        require_same_spec(other.spec_);
        return amp_.dot(other.amp_);  // Eigen dot conjugates the left argument
    }

    void require_same_spec(const HilbertSpec& o) const {
        if (spec_ != o) throw std::invalid_argument("StateVector: Hilbert-space mismatch");
    }

private:
    HilbertSpec spec_;
    Vector amp_;
};

class DensityMatrix {
public:
    DensityMatrix(HilbertSpec spec, Matrix entries, double tol = kStateNormTol)
        : spec_(std::move(spec)), rho_(std::move(entries)) {
        if (rho_.rows() != spec_.dim() || rho_.cols() != spec_.dim())
            throw std::invalid_argument("DensityMatrix: shape does not match space dimension");
        if (std::abs(rho_.trace().real() - 1.0) > tol || std::abs(rho_.trace().imag()) > tol)
            throw std::invalid_argument("DensityMatrix: trace differs from one beyond tolerance");
        if (hermiticity_residual() > 1e2 * tol)
            throw std::invalid_argument("DensityMatrix: not Hermitian within tolerance");
    }

    static DensityMatrix pure(const StateVector& psi) {
        Matrix m = psi.amplitudes() * psi.amplitudes().adjoint();
        const double n2 = psi.amplitudes().squaredNorm();
        m /= n2;
        return DensityMatrix(psi.spec(), std::move(m));
    }

    static DensityMatrix maximally_mixed(const HilbertSpec& spec) {
        const auto d = spec.dim();
        Matrix m = Matrix::Identity(d, d) / static_cast<double>(d);
        return DensityMatrix(spec, std::move(m));
    }

    const HilbertSpec& spec() const { return spec_; }
    const Matrix& entries() const { return rho_; }
    Matrix& entries() { return rho_; }
    std::int64_t dim() const { return rho_.rows(); }

    double trace_real() const { return rho_.trace().real(); }

    double hermiticity_residual() const {
        return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
    }

    /// Smallest eigenvalue (dense eigensolve; intended for dim <= 512).
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (rho_ + rho_.adjoint()));
        if (es.info() != Eigen::Success) throw std::runtime_error("DensityMatrix: eigensolve failed");
        return es.eigenvalues().minCoeff();
    }

    /// Cheap indefiniteness probe: LLT of rho + shift*I succeeds iff
    /// min eigenvalue >= -shift (up to factorization roundoff).
    bool positive_within(double shift) const {
        Matrix m = 0.5 * (rho_ + rho_.adjoint());
        m.diagonal().array() += shift;
        Eigen::LLT<Matrix> llt(m);
        return llt.info() == Eigen::Success;
    }

private:
    HilbertSpec spec_;
    Matrix rho_;
};

// ---------------------------------------------------------------------------
// Local (single-mode) state factories
// ---------------------------------------------------------------------------

struct CoherentResult {
    StateVector state;
    double truncation_deficit;  // probability weight lost to the cutoff, before renormalization
};

/// Truncated coherent state |amp> on a single mode, renormalized after the
/// cutoff. Amplitudes before normalization are amp^n / sqrt(n!).
inline CoherentResult coherent_state(Complex amp, int cutoff) {
    if (!std::isfinite(amp.real()) || !std::isfinite(amp.imag()))
        throw std::invalid_argument("coherent_state: non-finite amplitude");
    if (cutoff < 1) throw std::invalid_argument("coherent_state: cutoff must be >= 1");
    HilbertSpec spec = HilbertSpec::single_mode(cutoff);
    Vector v(spec.dim());
    // Build relative to the vacuum weight e^{-|amp|^2/2}; the running product
    // amp^n/sqrt(n!) stays finite for any sensible cutoff.
    const double w0 = std::exp(-0.5 * std::norm(amp));
    Complex c = w0;
    v(0) = c;
    for (int n = 1; n <= cutoff; ++n) {
        c *= amp / std::sqrt(static_cast<double>(n));
        v(n) = c;
    }
    const double kept = v.squaredNorm();
    const double deficit = std::max(0.0, 1.0 - kept);
    if (kept == 0.0) throw std::invalid_argument("coherent_state: all weight beyond cutoff");
    v /= std::sqrt(kept);
    return CoherentResult{StateVector(std::move(spec), std::move(v)), deficit};
}

/// Logical cat states: bit 0 encodes N(|a>+|-a>), bit 1 encodes N(|ia>+|-ia>).
/// Both are even-parity superpositions; normalized in the truncated space.
inline StateVector cat_logical(int bit, double alpha, int cutoff) {
    if (bit != 0 && bit != 1) throw std::invalid_argument("cat_logical: bit must be 0 or 1");
    if (!(alpha > 0.0)) throw std::invalid_argument("cat_logical: alpha must be positive");
    const Complex a = (bit == 0) ? Complex(alpha, 0.0) : Complex(0.0, alpha);
    auto plus = coherent_state(a, cutoff);
    auto minus = coherent_state(-a, cutoff);
    Vector v = plus.state.amplitudes() + minus.state.amplitudes();
    const double n = v.norm();
    if (n == 0.0) throw std::runtime_error("cat_logical: degenerate superposition");
    v /= n;
    return StateVector(HilbertSpec::single_mode(cutoff), std::move(v));
}

// ---------------------------------------------------------------------------
// Composite-state helpers
// ---------------------------------------------------------------------------

/// Kronecker product of per-factor local vectors in flattening order.
inline Vector tensor(const std::vector<Vector>& factors) {
    Vector out = Vector::Ones(1);
    for (const auto& f : factors) {
        Vector next(out.size() * f.size());
        for (Eigen::Index i = 0; i < out.size(); ++i)
            next.segment(i * f.size(), f.size()) = out(i) * f;
        out.swap(next);
    }
    return out;
}

/// Basis vector for a qutrit level.
inline Vector qutrit_ket(Level l) {
    Vector v = Vector::Zero(HilbertSpec::kQutritDim);
    v(static_cast<int>(l)) = 1.0;
    return v;
}

/// Reduced density matrix of a single tensor factor (all others traced out).
inline Matrix reduced_density(const StateVector& psi, int factor) {
    const auto& spec = psi.spec();
    if (factor < 0 || factor >= spec.n_factors())
        throw std::out_of_range("reduced_density: factor index out of range");
    const int d = spec.factor_dim(factor);
    const std::int64_t stride = spec.factor_stride(factor);
    const std::int64_t dim = spec.dim();
    Matrix r = Matrix::Zero(d, d);
    const auto& a = psi.amplitudes();
    for (std::int64_t i = 0; i < dim; ++i) {
        const int ai = static_cast<int>((i / stride) % d);
        const std::int64_t base = i - ai * stride;
        for (int bi = 0; bi < d; ++bi) {
            r(ai, bi) += a(i) * std::conj(a(base + bi * stride));
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Fidelity
// ---------------------------------------------------------------------------

/// F = |<target|state>| for pure states.
inline double fidelity(const StateVector& target, const StateVector& state,
                       double target_norm_tol = kStateNormTol) {
    target.require_same_spec(state.spec());
    if (std::abs(target.norm() - 1.0) > target_norm_tol)
        throw std::invalid_argument("fidelity: target is not normalized");
    return std::abs(target.overlap(state));
}

/// F = sqrt(<target|rho|target>) against a density matrix.
inline double fidelity(const StateVector& target, const DensityMatrix& rho,
                       double target_norm_tol = kStateNormTol) {
    if (target.spec() != rho.spec()) throw std::invalid_argument("fidelity: Hilbert-space mismatch");
    if (std::abs(target.norm() - 1.0) > target_norm_tol)
        throw std::invalid_argument("fidelity: target is not normalized");
    const Complex q = target.amplitudes().dot(rho.entries() * target.amplitudes());
    return std::sqrt(std::max(0.0, q.real()));
}

}  // namespace catgate
