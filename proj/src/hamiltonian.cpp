// hamiltonian.cpp — Hamiltonian term assembly per model tier.

#include "catgate/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>

namespace catgate {

namespace {

ShiftOp coupling_op(const HilbertSpec& spec, int j, Level from, Level to) {
    // a_j |to><from| : the two factors act on disjoint slots.
    return shift_product(shift_qutrit(from, to, spec), shift_annihilation(j, spec));
}

ShiftOp crosstalk_op(const HilbertSpec& spec, int k, int l) {
    // a_k^dagger a_l
    return shift_product(shift_adjoint(shift_annihilation(k, spec)), shift_annihilation(l, spec));
}

Eigen::VectorXd qutrit_projector_diag(const HilbertSpec& spec, Level l) {
    Eigen::VectorXd d = Eigen::VectorXd::Zero(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        if (spec.qutrit_index_of(i) == static_cast<int>(l)) d[i] = 1.0;
    return d;
}

Eigen::VectorXd photon_number_diag(const HilbertSpec& spec, int j) {
    Eigen::VectorXd d(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i) d[i] = static_cast<double>(spec.photon_number_of(i, j));
    return d;
}

void add_coupling_terms(std::vector<HamiltonianTerm>& terms, const DeviceParams& p,
                        const HilbertSpec& spec, bool lab_frame, bool drop_gprime) {
    for (int j = 1; j <= p.n; ++j) {
        HamiltonianTerm t;
        t.op = coupling_op(spec, j, Level::e, Level::f);
        t.amp = p.g[static_cast<size_t>(j - 1)];
        t.freq = lab_frame ? 0.0 : p.detuning(j);
        t.label = "g" + std::to_string(j);
        terms.push_back(std::move(t));
    }
    if (!drop_gprime) {
        for (int j = 1; j <= p.n; ++j) {
            if (p.g_prime[static_cast<size_t>(j - 1)] == 0.0) continue;
            HamiltonianTerm t;
            t.op = coupling_op(spec, j, Level::g, Level::f);
            t.amp = p.g_prime[static_cast<size_t>(j - 1)];
            t.freq = lab_frame ? 0.0 : p.detuning_prime(j);
            t.label = "g'" + std::to_string(j);
            terms.push_back(std::move(t));
        }
    }
    for (int j = 1; j <= p.n; ++j) {
        if (p.g_tilde[static_cast<size_t>(j - 1)] == 0.0) continue;
        HamiltonianTerm t;
        t.op = coupling_op(spec, j, Level::g, Level::e);
        t.amp = p.g_tilde[static_cast<size_t>(j - 1)];
        t.freq = lab_frame ? 0.0 : p.detuning_tilde(j);
        t.label = "g~" + std::to_string(j);
        terms.push_back(std::move(t));
    }
    for (int k = 1; k <= p.n; ++k) {
        for (int l = k + 1; l <= p.n; ++l) {
            const double gkl = p.g_cross[static_cast<size_t>(k - 1)][static_cast<size_t>(l - 1)];
            if (gkl == 0.0) continue;
            HamiltonianTerm t;
            t.op = crosstalk_op(spec, k, l);
            t.amp = gkl;
            t.freq = lab_frame ? 0.0 : p.detuning_cross(k, l);
            t.label = "g" + std::to_string(k) + std::to_string(l);
            terms.push_back(std::move(t));
        }
    }
}

}  // namespace

HamiltonianGenerator::HamiltonianGenerator(HilbertSpec spec, Tier tier, Frame frame,
                                           std::vector<HamiltonianTerm> terms,
                                           Eigen::VectorXd static_diag)
    : spec_(std::move(spec)), tier_(tier), frame_(frame), terms_(std::move(terms)),
      static_diag_(std::move(static_diag)) {
    if (static_diag_.size() == 0) static_diag_ = Eigen::VectorXd::Zero(spec_.dim());
    if (static_diag_.size() != spec_.dim())
        throw std::invalid_argument("HamiltonianGenerator: diagonal length mismatch");
    for (const auto& t : terms_) {
        if (t.op.dim() != spec_.dim())
            throw std::invalid_argument("HamiltonianGenerator: term dimension mismatch");
        if (t.self_adjoint && (t.freq != 0.0 || t.amp.imag() != 0.0 || t.op.offset != 0))
            throw std::invalid_argument("HamiltonianGenerator: self-adjoint terms must be static real diagonals");
    }
}

bool HamiltonianGenerator::is_static() const {
    for (const auto& t : terms_)
        if (t.freq != 0.0) return false;
    return true;
}

double HamiltonianGenerator::max_frequency() const {
    double m = 0.0;
    for (const auto& t : terms_) m = std::max(m, std::abs(t.freq));
    return m;
}

double HamiltonianGenerator::norm_bound() const {
    double b = static_diag_.size() ? static_diag_.cwiseAbs().maxCoeff() : 0.0;
    for (const auto& t : terms_) {
        const double w = t.op.weight.size() ? t.op.weight.cwiseAbs().maxCoeff() : 0.0;
        b += (t.self_adjoint ? 1.0 : 2.0) * std::abs(t.amp) * w;
    }
    return b;
}

int HamiltonianGenerator::n_offdiagonal_blocks() const {
    int c = 0;
    for (const auto& t : terms_)
        if (!t.self_adjoint) c += 2;
    return c;
}

void HamiltonianGenerator::apply(double t, const Complex* x, Complex* out) const {
    const std::int64_t n = spec_.dim();
    const double* d = static_diag_.data();
    for (std::int64_t i = 0; i < n; ++i) out[i] = d[i] * x[i];
    for (const auto& term : terms_) {
        const Complex c = term.amp * std::polar(1.0, term.freq * t);
        term.op.apply(c, x, out);
        if (!term.self_adjoint) term.op.apply_adjoint(std::conj(c), x, out);
    }
}

void HamiltonianGenerator::accumulate(double t, const Complex* x, Complex* out) const {
    const std::int64_t n = spec_.dim();
    const double* d = static_diag_.data();
    for (std::int64_t i = 0; i < n; ++i) out[i] += d[i] * x[i];
    for (const auto& term : terms_) {
        const Complex c = term.amp * std::polar(1.0, term.freq * t);
        term.op.apply(c, x, out);
        if (!term.self_adjoint) term.op.apply_adjoint(std::conj(c), x, out);
    }
}

SparseOperator HamiltonianGenerator::at(double t) const {
    std::vector<Triplet> trips;
    for (std::int64_t i = 0; i < spec_.dim(); ++i)
        if (static_diag_[i] != 0.0) trips.emplace_back(i, i, Complex(static_diag_[i], 0.0));
    for (const auto& term : terms_) {
        const Complex c = term.amp * std::polar(1.0, term.freq * t);
        const std::int64_t n = term.op.dim();
        const std::int64_t lo = std::max<std::int64_t>(0, term.op.offset);
        const std::int64_t hi = std::min<std::int64_t>(n, n + term.op.offset);
        for (std::int64_t i = lo; i < hi; ++i) {
            const double w = term.op.weight[i];
            if (w == 0.0) continue;
            trips.emplace_back(i, i - term.op.offset, c * w);
            if (!term.self_adjoint) trips.emplace_back(i - term.op.offset, i, std::conj(c) * w);
        }
    }
    return SparseOperator::from_triplets(spec_, trips);
}

HamiltonianGenerator hamiltonian(const DeviceParams& p, const HilbertSpec& spec, Tier tier,
                                 Frame frame, HamiltonianOptions opts) {
    p.validate();
    if (spec.n_cavities() != p.n)
        throw std::invalid_argument("hamiltonian: spec cavity count differs from device");
    const bool lab = (tier == Tier::Lab);
    if (lab != (frame == Frame::Lab))
        throw std::invalid_argument("hamiltonian: unsupported tier/frame combination");

    std::vector<HamiltonianTerm> terms;
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(spec.dim());

    switch (tier) {
        case Tier::Ideal: {
            for (int j = 1; j <= p.n; ++j) {
                HamiltonianTerm t;
                t.op = coupling_op(spec, j, Level::e, Level::f);
                t.amp = p.g[static_cast<size_t>(j - 1)];
                t.freq = p.detuning(j);
                t.label = "g" + std::to_string(j);
                terms.push_back(std::move(t));
            }
            break;
        }
        case Tier::Effective:
        case Tier::EffectiveWithF: {
            const Eigen::VectorXd pe = qutrit_projector_diag(spec, Level::e);
            const Eigen::VectorXd pf = qutrit_projector_diag(spec, Level::f);
            for (int j = 1; j <= p.n; ++j) {
                const double lj = p.lambda_j(j);
                const Eigen::VectorXd nj = photon_number_diag(spec, j);
                diag -= lj * nj.cwiseProduct(pe);
                if (tier == Tier::EffectiveWithF)
                    diag += lj * (nj.array() + 1.0).matrix().cwiseProduct(pf);
            }
            break;
        }
        case Tier::Full: {
            add_coupling_terms(terms, p, spec, /*lab_frame=*/false, opts.drop_gprime);
            break;
        }
        case Tier::Lab: {
            diag = h0_diagonal(p, spec);
            add_coupling_terms(terms, p, spec, /*lab_frame=*/true, opts.drop_gprime);
            break;
        }
    }
    return HamiltonianGenerator(spec, tier, frame, std::move(terms), std::move(diag));
}

Eigen::VectorXd h0_diagonal(const DeviceParams& p, const HilbertSpec& spec) {
    if (spec.n_cavities() != p.n)
        throw std::invalid_argument("h0_diagonal: spec cavity count differs from device");
    Eigen::VectorXd d = Eigen::VectorXd::Zero(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        double v = 0.0;
        for (int j = 1; j <= p.n; ++j) v += p.omega_c[static_cast<size_t>(j - 1)] * spec.photon_number_of(i, j);
        const int q = spec.qutrit_index_of(i);
        if (q == static_cast<int>(Level::e)) v += p.omega_eg;
        if (q == static_cast<int>(Level::f)) v += p.omega_fg;
        d[i] = v;
    }
    return d;
}

std::vector<CollapseChannel> collapse_operators(const DeviceParams& p, const HilbertSpec& spec) {
    std::vector<CollapseChannel> ch;
    for (int j = 1; j <= p.n; ++j) {
        if (p.kappa[static_cast<size_t>(j - 1)] <= 0.0) continue;
        ch.push_back({p.kappa[static_cast<size_t>(j - 1)], shift_annihilation(j, spec), "a" + std::to_string(j)});
    }
    if (p.gamma_eg > 0.0) ch.push_back({p.gamma_eg, shift_qutrit(Level::e, Level::g, spec), "eg"});
    if (p.gamma_fe > 0.0) ch.push_back({p.gamma_fe, shift_qutrit(Level::f, Level::e, spec), "fe"});
    if (p.gamma_fg > 0.0) ch.push_back({p.gamma_fg, shift_qutrit(Level::f, Level::g, spec), "fg"});
    if (p.gamma_phi_e > 0.0) ch.push_back({p.gamma_phi_e, shift_qutrit(Level::e, Level::e, spec), "phi_e"});
    if (p.gamma_phi_f > 0.0) ch.push_back({p.gamma_phi_f, shift_qutrit(Level::f, Level::f, spec), "phi_f"});
    return ch;
}

}  // namespace catgate
