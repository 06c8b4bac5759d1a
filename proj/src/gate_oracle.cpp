// gate_oracle.cpp — Truth table, exact truncated-space unitary, and targets.

#include "catgate/gate_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace catgate {

void LogicalWord::validate() const {
    if (control == Level::f) throw std::invalid_argument("LogicalWord: control must be g or e");
    for (int b : targets)
        if (b != 0 && b != 1) throw std::invalid_argument("LogicalWord: target bits must be 0 or 1");
}

LogicalWord truth_table(const LogicalWord& w) {
    w.validate();
    LogicalWord out = w;
    if (w.control == Level::e)
        for (int& b : out.targets) b = 1 - b;
    return out;
}

StateVector encode_word(const LogicalWord& w, double alpha, const HilbertSpec& spec) {
    w.validate();
    if (static_cast<int>(w.targets.size()) != spec.n_cavities())
        throw std::invalid_argument("encode_word: word length must match cavity count");
    if (spec.n_spectators() != 0)
        throw std::invalid_argument("encode_word: spectators are not part of logical words");
    std::vector<Vector> factors;
    factors.push_back(qutrit_ket(w.control));
    for (int j = 1; j <= spec.n_cavities(); ++j)
        factors.push_back(cat_logical(w.targets[static_cast<size_t>(j - 1)], alpha, spec.cutoff(j)).amplitudes());
    return StateVector(spec, tensor(factors));
}

StateVector apply_ideal_unitary(const StateVector& psi, double lambda, double t, double f_pop_tol) {
    const auto& spec = psi.spec();
    if (!spec.has_qutrit()) throw std::invalid_argument("apply_ideal_unitary: composite space required");

    double f_pop = 0.0;
    const auto& a = psi.amplitudes();
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        if (spec.qutrit_index_of(i) == static_cast<int>(Level::f)) f_pop += std::norm(a(i));
    if (f_pop > f_pop_tol)
        throw std::invalid_argument("apply_ideal_unitary: f-level population above tolerance");

    Vector out = a;
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        if (spec.qutrit_index_of(i) != static_cast<int>(Level::e)) continue;
        int n = 0;
        for (int j = 1; j <= spec.n_cavities(); ++j) n += spec.photon_number_of(i, j);
        out(i) *= std::polar(1.0, lambda * t * static_cast<double>(n));
    }
    return StateVector(spec, std::move(out));
}

StateVector initial_plus_state(int n, double alpha, const HilbertSpec& spec) {
    if (spec.n_cavities() != n) throw std::invalid_argument("initial_plus_state: cavity count mismatch");
    if (spec.n_spectators() != 0)
        throw std::invalid_argument("initial_plus_state: spectators enter only through the target helper");
    std::vector<Vector> factors;
    Vector q = Vector::Zero(HilbertSpec::kQutritDim);
    q(static_cast<int>(Level::g)) = 1.0 / std::sqrt(2.0);
    q(static_cast<int>(Level::e)) = 1.0 / std::sqrt(2.0);
    factors.push_back(q);
    for (int j = 1; j <= n; ++j) factors.push_back(cat_logical(0, alpha, spec.cutoff(j)).amplitudes());
    Vector v = tensor(factors);
    return StateVector::normalized(spec, std::move(v));
}

void GhzSpec::validate() const {
    if (n_cats < 1) throw std::invalid_argument("GhzSpec: need at least one cat qubit");
    if (m_spectators < 0) throw std::invalid_argument("GhzSpec: negative spectator count");
    if (!(alpha > 0.0)) throw std::invalid_argument("GhzSpec: alpha must be positive");
}

StateVector ghz_target(const GhzSpec& g, const HilbertSpec& spec) {
    g.validate();
    if (spec.n_cavities() != g.n_cats) throw std::invalid_argument("ghz_target: cavity count mismatch");
    if (spec.n_spectators() != 0) throw std::invalid_argument("ghz_target: pass a spectator-free spec");
    const HilbertSpec full = (g.m_spectators == 0)
                                 ? spec
                                 : HilbertSpec(spec.n_cavities(), spec.cutoffs(), g.m_spectators);

    Vector two_g = Vector::Zero(2), two_e = Vector::Zero(2);
    two_g(0) = 1.0;
    two_e(1) = 1.0;

    std::vector<Vector> branch_g, branch_e;
    for (int s = 0; s < g.m_spectators; ++s) {
        branch_g.push_back(two_g);
        branch_e.push_back(two_e);
    }
    branch_g.push_back(qutrit_ket(Level::g));
    branch_e.push_back(qutrit_ket(Level::e));
    for (int j = 1; j <= g.n_cats; ++j) {
        branch_g.push_back(cat_logical(0, g.alpha, spec.cutoff(j)).amplitudes());
        branch_e.push_back(cat_logical(1, g.alpha, spec.cutoff(j)).amplitudes());
    }
    Vector v = tensor(branch_g) + tensor(branch_e);
    return StateVector::normalized(full, std::move(v));
}

PhaseCompensation best_qutrit_phase(const StateVector& target, const StateVector& state) {
    target.require_same_spec(state.spec());
    const auto& spec = target.spec();
    Complex a_e(0.0, 0.0), a_rest(0.0, 0.0);
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        const Complex c = std::conj(target.amplitudes()(i)) * state.amplitudes()(i);
        if (spec.qutrit_index_of(i) == static_cast<int>(Level::e)) a_e += c;
        else a_rest += c;
    }
    PhaseCompensation out;
    out.fidelity_raw = std::abs(a_rest + a_e);
    out.phi = std::arg(a_rest) - std::arg(a_e);
    out.fidelity_best = std::abs(a_rest) + std::abs(a_e);
    return out;
}

}  // namespace catgate
