// test_trajectories.cpp — unraveling correctness: deterministic limit, jump
// statistics, agreement with the dense solver, and seed reproducibility.

#include <doctest.h>

#include <cmath>

#include "catgate/evolve.hpp"
#include "catgate/trajectories.hpp"

using namespace catgate;
using doctest::Approx;

namespace {

HamiltonianGenerator zero_generator(const HilbertSpec& spec) {
    return HamiltonianGenerator(spec, Tier::Effective, Frame::Interaction, {},
                                Eigen::VectorXd::Zero(spec.dim()));
}

StateVector fock_state(const HilbertSpec& spec, int q, int n) {
    Vector v = Vector::Zero(spec.dim());
    v(spec.flatten({q, n})) = 1.0;
    return StateVector(spec, std::move(v));
}

}  // namespace

TEST_CASE("zero rates reproduce the deterministic evolution exactly") {
    const HilbertSpec spec(1, 4);
    const auto gen = zero_generator(spec);
    const auto psi0 = StateVector::normalized(spec, Vector::Random(spec.dim()));
    EvolutionConfig cfg;
    cfg.t_final = 1e-6;
    cfg.step = 1e-7;

    TrajectoryConfig tc;
    tc.n_traj = 17;
    tc.seed = 9;
    tc.collect_density = true;
    const auto res = evolve_trajectories(gen, {}, psi0, cfg, tc, &psi0);
    CHECK(res.mean_jumps == 0.0);
    CHECK(res.n_no_jump == 17);
    CHECK(res.fidelity.back().fidelity == Approx(1.0).epsilon(1e-12));
    CHECK(res.fidelity.back().std_error == 0.0);

    const Matrix expect = psi0.amplitudes() * psi0.amplitudes().adjoint();
    CHECK((res.rho.back() - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("damped cavity: survival statistics and averaged population") {
    const HilbertSpec spec(1, 3);
    const double kappa = 1.0e5;
    const double T = 10e-6;  // kappa T = 1
    std::vector<CollapseChannel> ch{{kappa, shift_annihilation(1, spec), "a1"}};
    const auto psi0 = fock_state(spec, 0, 1);

    EvolutionConfig cfg;
    cfg.t_final = T;
    cfg.step = 0.05e-6;
    TrajectoryConfig tc;
    tc.n_traj = 2000;
    tc.seed = 1234;

    const auto res = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, &psi0);

    // survival of the initial Fock state is exp(-kappa T)
    const double p_expect = std::exp(-1.0);
    const double frac_nojump = static_cast<double>(res.n_no_jump) / 2000.0;
    const double sigma = std::sqrt(p_expect * (1 - p_expect) / 2000.0);
    CHECK(std::abs(frac_nojump - p_expect) < 4.0 * sigma);

    // the projector estimate agrees with the closed form within three SE
    const auto& est = res.fidelity.back();
    CHECK(std::abs(est.mean_overlap_sq - p_expect) < 3.0 * est.se_overlap_sq + 1e-9);
    CHECK(est.std_error > 0.0);
    CHECK(res.mean_jumps == Approx(1.0 - p_expect).epsilon(0.15));
}

TEST_CASE("trajectory average matches the dense solver on a lossy model") {
    const HilbertSpec spec(1, 3);
    DeviceParams p;
    p.n = 1;
    p.alpha = 1.0;
    p.omega_eg = kTwoPi * 4.0e9;
    p.omega_fe = kTwoPi * 3.3e9;
    p.omega_fg = kTwoPi * 7.3e9;
    p.omega_c = {kTwoPi * 3.27e9};  // 30 MHz detuning keeps steps cheap
    p.g = {kTwoPi * 3.0e6};
    p.g_prime = {0.0};
    p.g_tilde = {kTwoPi * 2.1e6};
    p.g_cross = {{0.0}};
    p.kappa = {2.0e4};
    p.gamma_eg = 1.0 / 60e-6;
    p.gamma_phi_e = 1.0 / 20e-6;

    const auto gen = hamiltonian(p, spec, Tier::Full);
    const auto ch = collapse_operators(p, spec);
    CHECK(ch.size() == 3);

    Vector v = Vector::Zero(spec.dim());
    v(spec.flatten({0, 1})) = 1.0 / std::sqrt(2.0);
    v(spec.flatten({1, 0})) = 1.0 / std::sqrt(2.0);
    const StateVector psi0(spec, v);
    const StateVector target = psi0;

    EvolutionConfig cfg;
    cfg.t_final = 2.0e-6;
    const auto dense = evolve_master(gen, ch, DensityMatrix::pure(psi0), cfg);
    const double f_dense = fidelity(target, dense.states.back());

    TrajectoryConfig tc;
    tc.n_traj = 1500;
    tc.seed = 77;
    const auto traj = evolve_trajectories(gen, ch, psi0, cfg, tc, &target);
    const auto& est = traj.fidelity.back();
    CHECK(std::abs(est.fidelity - f_dense) <= 3.0 * est.std_error + 1e-6);
}

TEST_CASE("identical seed and config give identical results") {
    const HilbertSpec spec(1, 3);
    const double kappa = 8.0e4;
    std::vector<CollapseChannel> ch{{kappa, shift_annihilation(1, spec), "a1"}};
    const auto psi0 = fock_state(spec, 0, 1);
    EvolutionConfig cfg;
    cfg.t_final = 10e-6;
    cfg.step = 0.1e-6;
    TrajectoryConfig tc;
    tc.n_traj = 400;
    tc.seed = 555;

    const auto a = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, &psi0);
    const auto b = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, &psi0);
    CHECK(a.fidelity.back().mean_overlap_sq == b.fidelity.back().mean_overlap_sq);
    CHECK(a.fidelity.back().se_overlap_sq == b.fidelity.back().se_overlap_sq);
    CHECK(a.mean_jumps == b.mean_jumps);

    TrajectoryConfig tc2 = tc;
    tc2.seed = 556;
    const auto c = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc2, &psi0);
    CHECK(c.fidelity.back().mean_overlap_sq != a.fidelity.back().mean_overlap_sq);
}

TEST_CASE("thread count does not change the estimates") {
    const HilbertSpec spec(1, 3);
    std::vector<CollapseChannel> ch{{5.0e4, shift_annihilation(1, spec), "a1"}};
    const auto psi0 = fock_state(spec, 0, 2);
    EvolutionConfig cfg;
    cfg.t_final = 6e-6;
    cfg.step = 0.1e-6;
    TrajectoryConfig tc;
    tc.n_traj = 300;
    tc.seed = 31;
    tc.n_threads = 1;
    const auto a = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, &psi0);
    tc.n_threads = 4;
    const auto b = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, &psi0);
    CHECK(a.fidelity.back().mean_overlap_sq == b.fidelity.back().mean_overlap_sq);
    CHECK(a.fidelity.back().se_overlap_sq == b.fidelity.back().se_overlap_sq);
}

TEST_CASE("multi-channel jumps preserve normalization of the record states") {
    const HilbertSpec spec(1, 2);
    std::vector<CollapseChannel> ch{{1.0e5, shift_annihilation(1, spec), "a1"},
                                    {0.5e5, shift_qutrit(Level::e, Level::g, spec), "eg"}};
    Vector v = Vector::Zero(spec.dim());
    v(spec.flatten({1, 1})) = 1.0;
    const StateVector psi0(spec, v);
    EvolutionConfig cfg;
    cfg.t_final = 20e-6;
    cfg.step = 0.1e-6;
    TrajectoryConfig tc;
    tc.n_traj = 256;
    tc.seed = 8;
    tc.collect_density = true;
    const auto res = evolve_trajectories(zero_generator(spec), ch, psi0, cfg, tc, nullptr);
    CHECK(res.mean_jumps > 0.5);
    const double tr = res.rho.back().trace().real();
    CHECK(tr == Approx(1.0).epsilon(1e-10));
}

TEST_CASE("config validation") {
    TrajectoryConfig tc;
    tc.n_traj = 0;
    CHECK_THROWS(tc.validate());
    tc.n_traj = 1;
    tc.jump_tol = 0.0;
    CHECK_THROWS(tc.validate());
}
