// device.cpp — Device parameterization and validity diagnostics.

#include "catgate/device.hpp"

#include <cmath>
#include <stdexcept>

namespace catgate {

void DeviceParams::validate(double level_tol) const {
    if (n < 1) throw std::invalid_argument("DeviceParams: need at least one cavity");
    if (static_cast<int>(omega_c.size()) != n || static_cast<int>(g.size()) != n ||
        static_cast<int>(g_prime.size()) != n || static_cast<int>(g_tilde.size()) != n ||
        static_cast<int>(kappa.size()) != n)
        throw std::invalid_argument("DeviceParams: per-cavity arrays must have length n");
    if (static_cast<int>(g_cross.size()) != n)
        throw std::invalid_argument("DeviceParams: crosstalk matrix must be n x n");
    for (const auto& row : g_cross)
        if (static_cast<int>(row.size()) != n)
            throw std::invalid_argument("DeviceParams: crosstalk matrix must be n x n");

    // Level-diagram consistency.
    const double scale = std::abs(omega_fg) > 0 ? std::abs(omega_fg) : 1.0;
    if (std::abs(omega_fg - (omega_eg + omega_fe)) > level_tol * scale)
        throw std::invalid_argument("DeviceParams: omega_fg must equal omega_eg + omega_fe");

    for (int j = 1; j <= n; ++j) {
        if (detuning(j) == 0.0) throw std::invalid_argument("DeviceParams: zero detuning");
    }
    for (double r : kappa)
        if (r < 0.0) throw std::invalid_argument("DeviceParams: negative decay rate");
    for (double r : {gamma_eg, gamma_fe, gamma_fg, gamma_phi_e, gamma_phi_f})
        if (r < 0.0) throw std::invalid_argument("DeviceParams: negative decoherence rate");
}

DeviceParams table1_params() {
    DeviceParams p;
    p.n = 3;
    p.alpha = 1.25;
    p.omega_eg = kTwoPi * 4.0e9;
    p.omega_fe = kTwoPi * 3.3e9;
    p.omega_fg = kTwoPi * 7.3e9;
    p.omega_c = {kTwoPi * 3.24e9, kTwoPi * 3.21e9, kTwoPi * 3.18e9};

    const double g1 = kTwoPi * 4.5e6;
    std::vector<double> det(3);
    for (int j = 1; j <= 3; ++j) det[static_cast<size_t>(j - 1)] = p.omega_fe - p.omega_c[static_cast<size_t>(j - 1)];
    p.g = solve_matched_couplings(g1, det, 0.0);

    p.g_prime.resize(3);
    p.g_tilde.resize(3);
    double g_max = 0.0;
    for (int j = 0; j < 3; ++j) {
        p.g_prime[static_cast<size_t>(j)] = 0.01 * p.g[static_cast<size_t>(j)];
        p.g_tilde[static_cast<size_t>(j)] = p.g[static_cast<size_t>(j)] / std::sqrt(2.0);
        g_max = std::max(g_max, p.g[static_cast<size_t>(j)]);
    }
    const double g_cr = 0.01 * g_max;
    p.g_cross.assign(3, std::vector<double>(3, 0.0));
    for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
            if (k != l) p.g_cross[static_cast<size_t>(k)][static_cast<size_t>(l)] = g_cr;

    p.kappa = {1.0 / 45e-6, 1.0 / 45e-6, 1.0 / 45e-6};
    p.gamma_eg = 1.0 / 60e-6;
    p.gamma_fg = 1.0 / 150e-6;
    p.gamma_fe = 1.0 / 30e-6;
    p.gamma_phi_e = 1.0 / 20e-6;
    p.gamma_phi_f = 1.0 / 20e-6;

    p.validate();
    return p;
}

std::vector<double> solve_matched_couplings(double g1, const std::vector<double>& detunings, double c) {
    if (detunings.empty()) throw std::invalid_argument("solve_matched_couplings: need detunings");
    if (!(g1 > 0.0)) throw std::invalid_argument("solve_matched_couplings: g1 must be positive");
    if (std::abs(c) >= 1.0) throw std::invalid_argument("solve_matched_couplings: |c| must be < 1");
    const double d1 = detunings.front();
    for (double d : detunings)
        if (d == 0.0 || (d > 0.0) != (d1 > 0.0))
            throw std::invalid_argument("solve_matched_couplings: detunings must share the sign of the first");
    if (c != 0.0 && detunings.size() != 3)
        throw std::invalid_argument("solve_matched_couplings: c != 0 is a three-cavity relation");

    const double lambda1 = g1 * g1 / d1;
    std::vector<double> g(detunings.size());
    for (size_t j = 0; j < detunings.size(); ++j) {
        double scale = 1.0;       // lambda_j = lambda_1 / scale
        if (j == 1) scale = 1.0 + c;
        if (j == 2) scale = 1.0 - c;
        g[j] = std::sqrt(lambda1 * detunings[j] / scale);
    }
    g[0] = g1;
    return g;
}

GateTiming lambda_and_gate_time(const DeviceParams& p, bool require_matched, double rel_tol) {
    if (p.n < 1) throw std::invalid_argument("lambda_and_gate_time: empty device");
    const double lambda1 = p.lambda_j(1);
    if (require_matched) {
        for (int j = 2; j <= p.n; ++j) {
            const double rel = std::abs(p.lambda_j(j) - lambda1) / std::abs(lambda1);
            if (rel > rel_tol)
                throw std::runtime_error("lambda_and_gate_time: per-cavity Stark shifts not matched");
        }
    }
    GateTiming t;
    t.lambda = lambda1;
    t.t_gate = M_PI / (2.0 * lambda1);
    return t;
}

ConditionReport diagnose_conditions(const DeviceParams& p, double threshold) {
    ConditionReport r;
    r.threshold = threshold;
    for (int j = 1; j <= p.n; ++j) {
        r.detuning_ratio.push_back(std::abs(p.detuning(j)) / p.g[static_cast<size_t>(j - 1)]);
        r.lambda.push_back(p.lambda_j(j));
        if (r.detuning_ratio.back() < threshold) r.any_flagged = true;
    }
    for (int j = 1; j <= p.n; ++j) {
        for (int k = j + 1; k <= p.n; ++k) {
            PairMetric m;
            m.j = j;
            m.k = k;
            const double dj = p.detuning(j), dk = p.detuning(k);
            m.metric = std::abs(dj - dk) / (std::abs(1.0 / dj) + std::abs(1.0 / dk));
            m.coupling = p.g[static_cast<size_t>(j - 1)] * p.g[static_cast<size_t>(k - 1)];
            m.quotient = m.coupling > 0.0 ? m.metric / m.coupling : 0.0;
            m.flagged = m.quotient < threshold;
            if (m.flagged) r.any_flagged = true;
            r.pairs.push_back(m);
        }
    }
    double spread = 0.0;
    for (double l : r.lambda) spread = std::max(spread, std::abs(l - r.lambda.front()) / std::abs(r.lambda.front()));
    r.lambda_spread_rel = spread;
    return r;
}

std::vector<double> quality_factors(const DeviceParams& p, double kappa_inv) {
    if (!(kappa_inv > 0.0)) throw std::invalid_argument("quality_factors: kappa_inv must be positive");
    std::vector<double> q;
    q.reserve(p.omega_c.size());
    for (double w : p.omega_c) q.push_back(w * kappa_inv);
    return q;
}

}  // namespace catgate
