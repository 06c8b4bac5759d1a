// trajectories.hpp — Monte-Carlo wavefunction unraveling of the lossy model.
// The deterministic no-jump segment is integrated once and shared across
// trajectories; each trajectory owns a counter-based random stream, so results
// are bit-identical for a given (seed, config) regardless of scheduling.

#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "catgate/evolve.hpp"
#include "catgate/hamiltonian.hpp"
#include "catgate/state.hpp"

namespace catgate {

struct TrajectoryConfig {
    int n_traj = 1;
    std::uint64_t seed = 0;
    double jump_tol = 1e-10;         // relative norm tolerance of the jump-time bisection
    int max_bisections = 64;
    int checkpoint_interval = 128;   // steps between stored states on the shared segment
    int n_threads = 0;               // 0: worker-count environment setting
    bool collect_density = false;    // accumulate averaged rho (forces single-threaded reduction)

    void validate() const;
};

struct TrajectoryEstimate {
    double fidelity = 0.0;           // sqrt(mean |<target|psi>|^2)
    double std_error = 0.0;          // delta-method standard error of the fidelity
    double mean_overlap_sq = 0.0;
    double se_overlap_sq = 0.0;
    /// Best single qutrit-phase correction exp(i phi |e><e|) applied to the
    /// state before scoring, optimized in closed form at the ensemble level.
    double fidelity_compensated = 0.0;
    double std_error_compensated = 0.0;
    double phi = 0.0;
};

struct TrajectoryResult {
    std::vector<double> times;                    // record times
    std::vector<TrajectoryEstimate> fidelity;     // per record time (when a target was given)
    std::vector<Matrix> rho;                      // averaged density per record time (opt-in)
    double mean_jumps = 0.0;                      // jumps per trajectory
    std::int64_t n_no_jump = 0;                   // trajectories that never jumped
};

/// Unravel the master equation for a pure initial state. When `target` is
/// given, per-record-time fidelity estimators (with standard errors) are
/// produced; with collect_density, the trajectory-averaged density matrix is
/// accumulated as well.
TrajectoryResult evolve_trajectories(const HamiltonianGenerator& gen,
                                     const std::vector<CollapseChannel>& channels,
                                     const StateVector& psi0, const EvolutionConfig& cfg,
                                     const TrajectoryConfig& tcfg,
                                     const StateVector* target = nullptr);

}  // namespace catgate
