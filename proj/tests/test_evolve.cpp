// test_evolve.cpp — integrator oracles: free evolution, phase readoff, the
// damped-cavity and pure-dephasing closed forms, RK4 order, frame transforms.

#include <doctest.h>

#include <cmath>

#include "catgate/evolve.hpp"
#include "catgate/gate_oracle.hpp"

using namespace catgate;
using doctest::Approx;

namespace {

HamiltonianGenerator zero_generator(const HilbertSpec& spec) {
    return HamiltonianGenerator(spec, Tier::Effective, Frame::Interaction, {},
                                Eigen::VectorXd::Zero(spec.dim()));
}

DeviceParams one_cavity_params() {
    DeviceParams p;
    p.n = 1;
    p.alpha = 1.25;
    p.omega_eg = kTwoPi * 4.0e9;
    p.omega_fe = kTwoPi * 3.3e9;
    p.omega_fg = kTwoPi * 7.3e9;
    p.omega_c = {kTwoPi * 3.24e9};
    p.g = {kTwoPi * 4.5e6};
    p.g_prime = {0.0};
    p.g_tilde = {0.0};
    p.g_cross = {{0.0}};
    p.kappa = {0.0};
    return p;
}

}  // namespace

TEST_CASE("zero Hamiltonian leaves the state unchanged") {
    const HilbertSpec spec(1, 5);
    const auto psi0 = StateVector::normalized(spec, Vector::Random(spec.dim()));
    EvolutionConfig cfg;
    cfg.t_final = 1e-6;
    const auto res = evolve_schrodinger(zero_generator(spec), psi0, cfg);
    CHECK((res.states.back().amplitudes() - psi0.amplitudes()).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("diagonal tier puts phase exp(+i lambda t) on |e>|1>") {
    const auto p = one_cavity_params();
    const HilbertSpec spec(1, 5);
    const auto gen = hamiltonian(p, spec, Tier::Effective);
    const double lambda = p.lambda_j(1);

    Vector v = Vector::Zero(spec.dim());
    const auto idx = spec.flatten({1, 1});  // |e>|1>
    v(idx) = 1.0;
    EvolutionConfig cfg;
    cfg.t_final = 0.4e-6;
    cfg.resolution = 120.0;
    const auto res = evolve_schrodinger(gen, StateVector(spec, v), cfg);
    const Complex expect = std::polar(1.0, lambda * cfg.t_final);
    CHECK(std::abs(res.states.back().amplitudes()(idx) - expect) < 1e-9);
    CHECK(res.max_norm_drift < 1e-10);
}

TEST_CASE("quarter-period rotation maps one cat word onto the other") {
    const auto p = one_cavity_params();
    const HilbertSpec spec(1, 15);
    const auto gen = hamiltonian(p, spec, Tier::Effective);
    const auto timing = lambda_and_gate_time(p);

    std::vector<Vector> f{qutrit_ket(Level::e), cat_logical(0, p.alpha, 15).amplitudes()};
    const StateVector psi0(spec, tensor(f));
    std::vector<Vector> ft{qutrit_ket(Level::e), cat_logical(1, p.alpha, 15).amplitudes()};
    const StateVector target(spec, tensor(ft));

    EvolutionConfig cfg;
    cfg.t_final = timing.t_gate;
    const auto res = evolve_schrodinger(gen, psi0, cfg);
    CHECK(fidelity(target, res.states.back()) >= 1.0 - 1e-6);
}

TEST_CASE("record times land exactly and include t = 0") {
    const HilbertSpec spec(1, 3);
    const auto psi0 = StateVector::normalized(spec, Vector::Ones(spec.dim()));
    EvolutionConfig cfg;
    cfg.t_final = 1e-6;
    cfg.record_times = {0.0, 0.3e-6, 1e-6};
    const auto res = evolve_schrodinger(zero_generator(spec), psi0, cfg);
    REQUIRE(res.times.size() == 3);
    CHECK(res.times[0] == 0.0);
    CHECK(res.times[1] == Approx(0.3e-6));
    CHECK(res.times[2] == Approx(1e-6));
}

TEST_CASE("explicit steps that cannot resolve the fastest coefficient are rejected") {
    const auto p = one_cavity_params();
    const HilbertSpec spec(1, 3);
    const auto gen = hamiltonian(p, spec, Tier::Ideal);  // coefficient at the detuning frequency
    EvolutionConfig cfg;
    cfg.t_final = 1e-6;
    cfg.step = 1e-8;  // far too coarse for a 60 MHz coefficient at r = 20
    const auto psi0 = StateVector::normalized(spec, Vector::Ones(spec.dim()));
    CHECK_THROWS(evolve_schrodinger(gen, psi0, cfg));
}

TEST_CASE("damped cavity: excited population follows exp(-kappa t)") {
    const HilbertSpec spec(1, 3);
    const double kappa = 1.0e5;
    std::vector<CollapseChannel> ch{{kappa, shift_annihilation(1, spec), "a1"}};

    Vector v = Vector::Zero(spec.dim());
    const auto idx = spec.flatten({0, 1});  // |g>|1>
    v(idx) = 1.0;
    const auto rho0 = DensityMatrix::pure(StateVector(spec, v));

    EvolutionConfig cfg;
    cfg.t_final = 10e-6;  // kappa * t = 1
    cfg.step = 0.05e-6;
    const auto res = evolve_master(zero_generator(spec), ch, rho0, cfg);
    const double p1 = res.states.back().entries()(idx, idx).real();
    CHECK(p1 == Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(res.max_trace_drift < 1e-10);
    CHECK(res.positivity_ok.back());
    CHECK(res.min_eigenvalue.back() > -1e-9);
}

TEST_CASE("integrator error scales as the fourth power of the step") {
    const HilbertSpec spec(1, 3);
    const double kappa = 1.0e5;
    std::vector<CollapseChannel> ch{{kappa, shift_annihilation(1, spec), "a1"}};
    Vector v = Vector::Zero(spec.dim());
    const auto idx = spec.flatten({0, 1});
    v(idx) = 1.0;
    const auto rho0 = DensityMatrix::pure(StateVector(spec, v));

    auto error_at = [&](double step) {
        EvolutionConfig cfg;
        cfg.t_final = 10e-6;
        cfg.step = step;
        const auto res = evolve_master(zero_generator(spec), ch, rho0, cfg);
        return std::abs(res.states.back().entries()(idx, idx).real() - std::exp(-1.0));
    };
    const double e1 = error_at(1.0e-6);
    const double e2 = error_at(0.5e-6);
    const double ratio = e1 / e2;
    CHECK(ratio > 13.0);
    CHECK(ratio < 19.0);
}

TEST_CASE("pure dephasing halves the coherence decay rate") {
    const HilbertSpec spec(1, 1);
    const double gamma = 5.0e4;
    std::vector<CollapseChannel> ch{{gamma, shift_qutrit(Level::e, Level::e, spec), "phi_e"}};

    Vector v = Vector::Zero(spec.dim());
    const auto ig = spec.flatten({0, 0});
    const auto ie = spec.flatten({1, 0});
    v(ig) = v(ie) = 1.0 / std::sqrt(2.0);
    const auto rho0 = DensityMatrix::pure(StateVector(spec, v));

    EvolutionConfig cfg;
    cfg.t_final = 20e-6;  // gamma * t = 1
    cfg.step = 0.05e-6;
    const auto res = evolve_master(zero_generator(spec), ch, rho0, cfg);
    const Complex coh = res.states.back().entries()(ig, ie);
    CHECK(std::abs(coh) == Approx(0.5 * std::exp(-gamma * cfg.t_final / 2.0)).epsilon(1e-6));
}

TEST_CASE("without dissipation the master equation matches the pure evolution") {
    const auto p = one_cavity_params();
    const HilbertSpec spec(1, 6);
    const auto gen = hamiltonian(p, spec, Tier::Ideal);
    const auto psi0 = StateVector::normalized(spec, Vector::Random(spec.dim()));

    EvolutionConfig cfg;
    cfg.t_final = 0.2e-6;
    cfg.resolution = 100.0;  // both routes carry O(h^4) error; refine to compare at 1e-8
    const auto pure = evolve_schrodinger(gen, psi0, cfg);
    const auto mixed = evolve_master(gen, {}, DensityMatrix::pure(psi0), cfg);
    // the state-vector norm drifts at the integrator level; normalize before
    // comparing the two solutions
    const auto pure_n = StateVector::normalized(spec, pure.states.back().amplitudes());
    const double f = fidelity(pure_n, mixed.states.back());
    CHECK(std::abs(f - 1.0) < 1e-8);
}

TEST_CASE("master solver refuses dense density matrices beyond the guard") {
    const HilbertSpec spec(2, 7);
    EvolutionConfig cfg;
    cfg.t_final = 1e-9;
    Matrix rho = Matrix::Zero(spec.dim(), spec.dim());
    rho(0, 0) = 1.0;
    MasterOptions opts;
    opts.dim_guard = spec.dim() - 1;
    CHECK_THROWS(evolve_master(zero_generator(spec), {}, DensityMatrix(spec, rho), cfg, opts));
}

TEST_CASE("frame transform is a diagonal phase map with an exact inverse") {
    const HilbertSpec spec(2, 3);
    Eigen::VectorXd d = Eigen::VectorXd::Random(spec.dim()) * 1e9;
    const auto psi = StateVector::normalized(spec, Vector::Random(spec.dim()));

    const auto at_zero = frame_transform(psi, d, 0.0, FrameDirection::ToInteraction);
    CHECK((at_zero.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() == 0.0);

    const double t = 3.7e-7;
    const auto fwd = frame_transform(psi, d, t, FrameDirection::ToInteraction);
    const auto back = frame_transform(fwd, d, t, FrameDirection::ToLab);
    CHECK((back.amplitudes() - psi.amplitudes()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("static-frame evolution agrees with the rotating-frame evolution") {
    // light version at tight tolerance; the acceptance suite runs the
    // gate-length check at cutoff 4
    auto p = table1_params();
    p.kappa = {0.0, 0.0, 0.0};
    const HilbertSpec spec(3, 2);
    const auto lab = hamiltonian(p, spec, Tier::Lab, Frame::Lab);
    const auto full = hamiltonian(p, spec, Tier::Full);
    const Eigen::VectorXd d = h0_diagonal(p, spec);

    // integrate against the centered spectrum (a global phase) to keep the
    // accumulated RK4 phase error small
    const double mid = 0.5 * (d.maxCoeff() + d.minCoeff());
    const auto lab_centered =
        HamiltonianGenerator(spec, Tier::Lab, Frame::Lab, lab.terms(), d.array() - mid);

    const auto psi0 = initial_plus_state(3, p.alpha, spec);
    const double t = 2.0e-9;

    EvolutionConfig lab_cfg;
    lab_cfg.t_final = t;
    lab_cfg.step = 2e-13;
    const auto lab_res = evolve_schrodinger(lab_centered, psi0, lab_cfg);
    const auto uncentered = frame_transform(lab_res.states.back(),
                                            Eigen::VectorXd::Constant(spec.dim(), mid), t,
                                            FrameDirection::ToLab);
    const auto lab_in_interaction = frame_transform(uncentered, d, t, FrameDirection::ToInteraction);

    EvolutionConfig int_cfg;
    int_cfg.t_final = t;
    int_cfg.resolution = 40.0;
    const auto int_res = evolve_schrodinger(full, psi0, int_cfg);

    CHECK(fidelity(lab_in_interaction, int_res.states.back(), 1e-6) >= 1.0 - 1e-9);
}
