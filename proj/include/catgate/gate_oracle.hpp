// gate_oracle.hpp — Analytic ground truth for the multi-target gate: the
// logical truth table, the closed-form unitary action on the e-branch, and
// the entangled target states (optionally with bookkeeping spectator qubits).

#pragma once

#include <vector>

#include "catgate/hilbert.hpp"
#include "catgate/state.hpp"

namespace catgate {

/// A logical word: qutrit control level (g or e) plus one bit per cavity.
struct LogicalWord {
    Level control = Level::g;
    std::vector<int> targets;

    void validate() const;
};

/// Gate action on a word: control g leaves targets alone, control e flips
/// every target; the control never changes.
LogicalWord truth_table(const LogicalWord& w);

/// Encode a logical word: |control> tensor cat_{l_1} ... cat_{l_n}.
StateVector encode_word(const LogicalWord& w, double alpha, const HilbertSpec& spec);

/// Exact gate unitary in the truncated space: phase exp(i lambda N_photons t)
/// on the e-branch, identity elsewhere. Errors if the f-level population
/// exceeds f_pop_tol.
StateVector apply_ideal_unitary(const StateVector& psi, double lambda, double t,
                                double f_pop_tol = 1e-9);

/// (|g> + |e>)/sqrt(2) tensor cat_0^n, normalized in the truncated space.
StateVector initial_plus_state(int n, double alpha, const HilbertSpec& spec);

struct GhzSpec {
    int n_cats = 1;
    int m_spectators = 0;   // uncoupled two-level systems, bookkeeping only
    double alpha = 0.0;

    void validate() const;
};

/// (|g..g>|0..0> + |e..e>|1..1>)/sqrt(2) with m_spectators two-level factors
/// prepended. The returned state lives on `spec` when m_spectators is zero and
/// on a spectator-extended copy of `spec` otherwise.
StateVector ghz_target(const GhzSpec& g, const HilbertSpec& spec);

struct PhaseCompensation {
    double phi = 0.0;             // optimal angle of exp(i phi |e><e|)
    double fidelity_raw = 0.0;    // without compensation
    double fidelity_best = 0.0;   // with the optimal angle
};

/// Diagnostic: the best single-parameter qutrit phase correction between a
/// target and a state. Reported only; fidelities elsewhere are raw.
PhaseCompensation best_qutrit_phase(const StateVector& target, const StateVector& state);

}  // namespace catgate
