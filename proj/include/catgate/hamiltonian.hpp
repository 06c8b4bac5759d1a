// hamiltonian.hpp — Hamiltonian generators for every model tier, the static
// free Hamiltonian used for frame changes, and the collapse channels of the
// lossy model.

#pragma once

#include <complex>
#include <string>
#include <vector>

#include "catgate/device.hpp"
#include "catgate/hilbert.hpp"
#include "catgate/ops.hpp"

namespace catgate {

/// Model tiers, from the bare dispersive coupling to the static laboratory
/// frame. The effective tiers are diagonal; the full tier adds the spurious
/// qutrit couplings and the inter-cavity crosstalk.
enum class Tier { Ideal, Effective, EffectiveWithF, Full, Lab };

enum class Frame { Interaction, Lab };

struct HamiltonianOptions {
    /// Remove the |g>-|f> coupling terms (amplitude ~1e-2 g, detuned by
    /// ~4 GHz). Their step-size cost is large and their fidelity effect is
    /// bounded by an A/B check in the test suite.
    bool drop_gprime = false;
};

/// One coupling term amp * e^{i freq t} * O (+ h.c. unless self-adjoint).
struct HamiltonianTerm {
    ShiftOp op;
    Complex amp{0.0, 0.0};
    double freq = 0.0;      // rad/s
    bool self_adjoint = false;
    std::string label;
};

/// Time-dependent operator source. Coupling terms keep their shift structure
/// so the integrators can apply H(t) without materializing a matrix; at(t)
/// materializes for inspection and testing.
class HamiltonianGenerator {
public:
    HamiltonianGenerator(HilbertSpec spec, Tier tier, Frame frame,
                         std::vector<HamiltonianTerm> terms, Eigen::VectorXd static_diag);

    const HilbertSpec& spec() const { return spec_; }
    Tier tier() const { return tier_; }
    Frame frame() const { return frame_; }

    bool is_static() const;
    double max_frequency() const;         // max |freq| over terms (rad/s)
    double norm_bound() const;            // crude upper bound on ||H(t)||

    /// Coupling terms (each non-self-adjoint one implies its h.c. partner).
    const std::vector<HamiltonianTerm>& terms() const { return terms_; }
    const Eigen::VectorXd& static_diagonal() const { return static_diag_; }
    int n_offdiagonal_blocks() const;

    /// out = H(t) x. Buffers must have spec().dim() entries.
    void apply(double t, const Complex* x, Complex* out) const;

    /// Accumulate H(t) x into out without zeroing (used by the master solver).
    void accumulate(double t, const Complex* x, Complex* out) const;

    SparseOperator at(double t) const;

private:
    HilbertSpec spec_;
    Tier tier_;
    Frame frame_;
    std::vector<HamiltonianTerm> terms_;
    Eigen::VectorXd static_diag_;   // merged real diagonal part
};

/// Build the generator for a tier/frame pair. Effective tiers and the ideal
/// and full tiers are interaction-frame only; the lab tier is lab-frame only.
HamiltonianGenerator hamiltonian(const DeviceParams& p, const HilbertSpec& spec, Tier tier,
                                 Frame frame = Frame::Interaction, HamiltonianOptions opts = {});

/// Diagonal of the free Hamiltonian used for frame changes:
/// sum_j omega_cj n_j + omega_eg |e><e| + omega_fg |f><f|.
Eigen::VectorXd h0_diagonal(const DeviceParams& p, const HilbertSpec& spec);

struct CollapseChannel {
    double rate = 0.0;     // 1/s
    ShiftOp op;            // applied as sqrt(rate) * op
    std::string label;
};

/// Collapse channels of the lossy model: photon loss per cavity, the three
/// qutrit relaxation paths, and pure dephasing of |e> and |f>. Channels with
/// zero rate are omitted.
std::vector<CollapseChannel> collapse_operators(const DeviceParams& p, const HilbertSpec& spec);

}  // namespace catgate
