// evolve.hpp — Fixed-step RK4 time evolution: unitary Schrodinger integration,
// Lindblad master-equation integration, and diagonal frame transforms.

#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "catgate/hamiltonian.hpp"
#include "catgate/state.hpp"

namespace catgate {

/// Integration plan. Either an explicit step or a resolution factor r
/// (steps per period of the fastest coefficient; a norm bound of the
/// generator caps the step for static operators). Record times are landed on
/// exactly by splitting the grid at each breakpoint.
struct EvolutionConfig {
    double t_final = 0.0;                // s
    double step = 0.0;                   // s; 0 means derive from resolution
    double resolution = 20.0;            // steps per fastest period
    std::vector<double> record_times;    // defaults to {t_final}

    void validate() const;
    /// Effective base step for a generator (before breakpoint splitting).
    double effective_step(const HamiltonianGenerator& gen) const;
};

struct SchrodingerResult {
    std::vector<StateVector> states;     // one per record time
    std::vector<double> times;
    double max_norm_drift = 0.0;         // max ||psi|| deviation from 1 seen at record times
};

/// Integrate d psi/dt = -i H(t) psi with classical RK4. The norm is not
/// renormalized; drift is reported as a diagnostic.
SchrodingerResult evolve_schrodinger(const HamiltonianGenerator& gen, const StateVector& psi0,
                                     const EvolutionConfig& cfg);

struct MasterResult {
    std::vector<DensityMatrix> states;   // one per record time
    std::vector<double> times;
    double max_trace_drift = 0.0;        // max |tr rho - 1| over the run
    std::vector<double> min_eigenvalue;  // per record time; NaN when only the probe ran
    std::vector<bool> positivity_ok;     // per record time
};

struct MasterOptions {
    std::int64_t dim_guard = 4096;       // refuse dense rho beyond this dimension
    std::int64_t eigensolve_dim = 512;   // full eigensolve below, LLT probe above
    double positivity_shift = 1e-6;
    int n_threads = 0;                   // 0: use the worker-count environment setting
};

/// Integrate the Lindblad master equation with classical RK4. Hermiticity is
/// enforced by symmetrization each step; the trace is monitored, not reset.
MasterResult evolve_master(const HamiltonianGenerator& gen, const std::vector<CollapseChannel>& channels,
                           const DensityMatrix& rho0, const EvolutionConfig& cfg, MasterOptions opts = {});

enum class FrameDirection { ToInteraction, ToLab };

/// Apply exp(+i H0 t) (ToInteraction) or exp(-i H0 t) (ToLab) for a diagonal
/// free Hamiltonian spectrum.
StateVector frame_transform(const StateVector& psi, const Eigen::VectorXd& h0_diag, double t,
                            FrameDirection dir);

/// Worker count from the CATGATE_WORKERS environment variable, defaulting to
/// the hardware concurrency.
int default_workers();

/// Static partition of [0, n) across up to n_threads workers.
void parallel_for(std::int64_t n, int n_threads, const std::function<void(std::int64_t, std::int64_t)>& body);

namespace detail {

/// Fixed step grid landing exactly on every record time.
struct StepSchedule {
    std::vector<double> t;                    // boundaries, t.front() = 0, t.back() = t_final
    std::vector<double> marks;                // sorted unique record times
    std::vector<std::int64_t> mark_index;     // boundary index of each mark
    std::int64_t n_steps() const { return static_cast<std::int64_t>(t.size()) - 1; }
};

StepSchedule build_schedule(const EvolutionConfig& cfg, const HamiltonianGenerator& gen);

/// Scratch vectors for one RK4 state-vector integration.
struct SchrodingerStepperBuffers {
    explicit SchrodingerStepperBuffers(std::int64_t dim);
    Vector k, acc, tmp, h_x;
};

/// out = -i H(t) x - (1/2) decay_diag x   (decay_diag may be null)
void schrodinger_rhs(const HamiltonianGenerator& gen, const Eigen::VectorXd* decay_diag, double t,
                     const Vector& x, Vector& out, Vector& h_x);

/// One in-place RK4 step of the (possibly non-Hermitian) Schrodinger equation.
void schrodinger_rk4_step(const HamiltonianGenerator& gen, const Eigen::VectorXd* decay_diag,
                          double t, double h, Vector& x, SchrodingerStepperBuffers& b);

}  // namespace detail

}  // namespace catgate
