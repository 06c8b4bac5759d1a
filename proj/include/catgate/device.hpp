// device.hpp — Physical device parameterization: transition and cavity
// frequencies, coupling strengths with the matching rule, decoherence rates,
// derived detunings, and validity diagnostics.

#pragma once

#include <string>
#include <vector>

#include "catgate/hilbert.hpp"

namespace catgate {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// All stored frequencies and rates are angular (rad/s). Conversions from
/// GHz/MHz/us happen only at the configuration boundary.
struct DeviceParams {
    int n = 0;                        // cavity count
    double alpha = 0.0;               // cat amplitude (dimensionless)

    double omega_eg = 0.0;            // qutrit transition frequencies (rad/s)
    double omega_fe = 0.0;
    double omega_fg = 0.0;

    std::vector<double> omega_c;      // cavity frequencies (rad/s)
    std::vector<double> g;            // |e>-|f> couplings (rad/s)
    std::vector<double> g_prime;      // |g>-|f> couplings (rad/s)
    std::vector<double> g_tilde;      // |g>-|e> couplings (rad/s)
    std::vector<std::vector<double>> g_cross;  // inter-cavity crosstalk (rad/s), symmetric, zero diagonal

    std::vector<double> kappa;        // cavity decay rates (1/s)
    double gamma_eg = 0.0;            // qutrit relaxation rates (1/s)
    double gamma_fe = 0.0;
    double gamma_fg = 0.0;
    double gamma_phi_e = 0.0;         // dephasing rates (1/s)
    double gamma_phi_f = 0.0;

    double delta_mix = 0.0;           // initial-state imbalance
    double c_mismatch = 0.0;          // matching-condition deviation

    // Derived detunings; recomputed, never stored.
    double detuning(int j) const { return omega_fe - omega_c.at(static_cast<size_t>(j - 1)); }
    double detuning_prime(int j) const { return omega_fg - omega_c.at(static_cast<size_t>(j - 1)); }
    double detuning_tilde(int j) const { return omega_eg - omega_c.at(static_cast<size_t>(j - 1)); }
    double detuning_cross(int k, int l) const {
        return omega_c.at(static_cast<size_t>(k - 1)) - omega_c.at(static_cast<size_t>(l - 1));
    }

    double lambda_j(int j) const { return g.at(static_cast<size_t>(j - 1)) * g.at(static_cast<size_t>(j - 1)) / detuning(j); }

    /// Throws if the structural invariants do not hold.
    void validate(double level_tol = 1e-6) const;
};

/// The bundled three-cavity reference parameter set: transition frequencies
/// 4.0/3.3/7.3 GHz, cavities at 3.24/3.21/3.18 GHz, g1/2pi = 4.5 MHz with
/// g2, g3 from the matching rule, transmon ratios for the spurious couplings,
/// and conservative decoherence times.
DeviceParams table1_params();

/// Solve g_j from g1 and the detunings so the per-cavity Stark shifts match:
/// g1^2/D1 = (1+c) g2^2/D2 = (1-c) g3^2/D3 (three-cavity form for c != 0;
/// c = 0 reduces to equal g_j^2/D_j for any n).
std::vector<double> solve_matched_couplings(double g1, const std::vector<double>& detunings, double c);

struct GateTiming {
    double lambda = 0.0;   // shared Stark-shift rate (rad/s)
    double t_gate = 0.0;   // pi / (2 lambda) (s)
};

/// lambda = g1^2/D1 and the quarter-period gate time. When require_matched is
/// set, throws if the per-cavity lambda_j spread exceeds rel_tol.
GateTiming lambda_and_gate_time(const DeviceParams& p, bool require_matched = true, double rel_tol = 1e-9);

struct PairMetric {
    int j = 0, k = 0;
    double metric = 0.0;     // |D_j - D_k| / (|1/D_j| + |1/D_k|), (rad/s)^2
    double coupling = 0.0;   // g_j * g_k, (rad/s)^2
    double quotient = 0.0;   // metric / coupling
    bool flagged = false;
};

struct ConditionReport {
    std::vector<double> detuning_ratio;   // |D_j| / g_j per cavity
    std::vector<PairMetric> pairs;
    std::vector<double> lambda;           // g_j^2 / D_j per cavity (rad/s)
    double lambda_spread_rel = 0.0;       // max_j |l_j - l_1| / l_1
    double threshold = 10.0;
    bool any_flagged = false;
};

/// Report-only dispersive-validity diagnostics; never throws on bad physics.
ConditionReport diagnose_conditions(const DeviceParams& p, double threshold = 10.0);

/// Cavity quality factors Q_j = omega_cj * kappa_inv.
std::vector<double> quality_factors(const DeviceParams& p, double kappa_inv);

}  // namespace catgate
