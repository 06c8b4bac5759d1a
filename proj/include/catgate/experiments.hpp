// experiments.hpp — Reproduction harness: non-ideal initial states, fidelity
// sweeps over the initial-state imbalance and the matching-condition
// deviation, convergence scans, and provenance-stamped CSV output.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "catgate/device.hpp"
#include "catgate/gate_oracle.hpp"
#include "catgate/hamiltonian.hpp"
#include "catgate/state.hpp"

namespace catgate {

/// Distorted preparation: per cavity sqrt(1+d)|a> + sqrt(1-d)|-a>, qutrit
/// (sqrt(1+d)|g> + sqrt(1-d)|e>)/sqrt(2); renormalized in the truncated space.
StateVector nonideal_initial_state(double delta, double alpha, const HilbertSpec& spec);

enum class SolverKind { Trajectories, Master };

inline const char* to_string(SolverKind k) {
    return k == SolverKind::Trajectories ? "trajectories" : "master";
}

struct SolverSettings {
    SolverKind kind = SolverKind::Trajectories;
    int n_traj = 2000;
    std::uint64_t seed = 1;
    int cutoff = 15;
    double resolution = 20.0;      // steps per fastest period
    bool drop_gprime = true;
    Tier tier = Tier::Full;
    int n_threads = 1;             // per-point; the sweep layer owns cross-point parallelism
    /// Score against the target up to one deterministic qutrit phase
    /// exp(i phi |e><e|). The spurious |g>-|e> couplings Stark-shift the two
    /// branches against each other by an O(1 rad) deterministic angle over the
    /// gate; the reference fidelity bounds are only reachable with this local
    /// correction applied, so it is the scoring default. Raw values are
    /// always reported alongside.
    bool compensate_phase = true;
};

struct PointResult {
    double fidelity = 0.0;         // scored fidelity (compensated by default)
    double fidelity_raw = 0.0;     // no phase correction
    double phi = 0.0;              // applied qutrit phase (rad)
    double std_error = 0.0;        // zero for master runs
    double wall_s = 0.0;
    double mean_jumps = 0.0;       // trajectories only
    double t_gate = 0.0;
};

/// Evolve the lossy model from the distorted initial state for one gate time
/// and score against the entangled target. Couplings are re-derived from the
/// matching rule at deviation c before building the model.
PointResult run_point(const DeviceParams& base, double delta, double c, double kappa_inv,
                      const SolverSettings& s);

struct SweepSpec {
    enum class Variable { Delta, C };
    Variable variable = Variable::Delta;
    std::vector<double> grid;                                  // sorted
    std::vector<double> kappa_inv_set = {45e-6, 60e-6, 100e-6};  // s
    SolverSettings solver;
    int n_workers = 0;   // grid-point parallelism; 0 = worker-count environment setting

    void validate() const;
};

struct SweepRow {
    std::string variable;
    double value = 0.0;
    double kappa_inv = 0.0;        // s
    double fidelity = 0.0;
    double std_error = 0.0;
    std::string solver;
    int cutoff = 0;
    double steps_per_period = 0.0;
    int n_traj = 0;
    std::uint64_t seed = 0;
    double wall_s = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;    // sorted by (value, kappa_inv)
    /// max |F(v) - F(-v)| over grid pairs, per kappa (delta sweeps)
    double max_asymmetry = 0.0;
    /// F non-increasing in |value| within 3 combined standard errors
    bool monotone_in_abs_value = true;
    /// F non-decreasing in kappa_inv within 3 combined standard errors
    bool monotone_in_kappa_inv = true;

    /// Minimum fidelity over the grid for one cavity-decay setting.
    double min_fidelity(double kappa_inv) const;
    std::string to_csv() const;
};

SweepResult run_delta_sweep(const DeviceParams& base, const SweepSpec& spec);
SweepResult run_c_sweep(const DeviceParams& base, const SweepSpec& spec);

struct ConvergenceRow {
    int cutoff = 0;
    double resolution = 0.0;
    double fidelity = 0.0;
    double std_error = 0.0;
    double wall_s = 0.0;
};

struct ConvergenceResult {
    std::vector<ConvergenceRow> rows;            // cutoff-major table
    int converged_cutoff = -1;                   // smallest cutoff with |dF| < tol to the next
    double converged_resolution = -1.0;          // smallest resolution with |dF| < tol to the next
    double tol = 5e-4;
};

/// Fidelity at delta = c = 0 across (cutoff, resolution) refinements.
ConvergenceResult run_convergence(const DeviceParams& base, const std::vector<int>& cutoffs,
                                  const std::vector<double>& resolutions, double kappa_inv,
                                  const SolverSettings& s, double tol = 5e-4);

/// Write the CSV (header pinned) and a JSON manifest with the full parameter
/// set, code version, config hash, and timestamps. Rows are flushed as they
/// are appended.
void write_sweep_csv(const std::string& path, const SweepResult& r);
void write_manifest(const std::string& path, const DeviceParams& params, const SweepSpec& spec,
                    const std::string& config_json);

/// Deterministic per-point seed from the sweep seed and grid coordinates.
std::uint64_t point_seed(std::uint64_t base_seed, int variable_id, int grid_index, int kappa_index);

}  // namespace catgate
