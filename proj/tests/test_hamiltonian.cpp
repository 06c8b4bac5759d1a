// test_hamiltonian.cpp — tier structure, hermiticity, frame consistency, and
// collapse channels.

#include <doctest.h>

#include <cmath>

#include "catgate/hamiltonian.hpp"
#include "catgate/rng.hpp"

using namespace catgate;
using doctest::Approx;

namespace {

const DeviceParams& params() {
    static const DeviceParams p = table1_params();
    return p;
}

}  // namespace

TEST_CASE("every tier is Hermitian at random times") {
    const HilbertSpec spec(3, 2);
    RandomStream rs(11, 0);
    for (Tier tier : {Tier::Ideal, Tier::Effective, Tier::EffectiveWithF, Tier::Full}) {
        const auto gen = hamiltonian(params(), spec, tier);
        for (int k = 0; k < 25; ++k) {
            const double t = rs.uniform() * 1e-6;
            CHECK(gen.at(t).hermiticity_residual() < 1e-12);
        }
    }
    const auto lab = hamiltonian(params(), spec, Tier::Lab, Frame::Lab);
    CHECK(lab.at(0.0).hermiticity_residual() < 1e-12);
    CHECK(lab.is_static());
}

TEST_CASE("diagonal tier annihilates the g branch and shifts the e branch") {
    const HilbertSpec spec(3, 3);
    const auto gen = hamiltonian(params(), spec, Tier::Effective);
    const double lambda = params().lambda_j(1);

    // any state supported on the g branch maps to zero
    Vector x = Vector::Zero(spec.dim());
    for (std::int64_t i = 0; i < spec.dim(); ++i)
        if (spec.qutrit_index_of(i) == 0) x(i) = Complex(0.3, -0.1);
    Vector out(spec.dim());
    gen.apply(0.0, x.data(), out.data());
    CHECK(out.cwiseAbs().maxCoeff() == Approx(0.0));

    // photon-number eigenvalue readoff on the e branch
    const std::int64_t i = spec.flatten({1, 1, 2, 3});
    Vector e_state = Vector::Zero(spec.dim());
    e_state(i) = 1.0;
    gen.apply(0.0, e_state.data(), out.data());
    CHECK(out(i).real() == Approx(-lambda * 6.0).epsilon(1e-12));
    CHECK(gen.at(0.0).dense()(i, i).real() == Approx(-lambda * 6.0).epsilon(1e-12));
}

TEST_CASE("f-branch correction is supported only on the f branch") {
    const HilbertSpec spec(3, 2);
    const auto with_f = hamiltonian(params(), spec, Tier::EffectiveWithF);
    const auto without = hamiltonian(params(), spec, Tier::Effective);
    const Matrix diff = with_f.at(0.0).dense() - without.at(0.0).dense();
    for (std::int64_t i = 0; i < spec.dim(); ++i) {
        for (std::int64_t j = 0; j < spec.dim(); ++j) {
            if (std::abs(diff(i, j)) > 0.0) {
                CHECK(spec.qutrit_index_of(i) == 2);
                CHECK(spec.qutrit_index_of(j) == 2);
            }
        }
    }
}

TEST_CASE("diagonal tier commutes with photon numbers and the e projector") {
    const HilbertSpec spec(3, 2);
    const auto gen = hamiltonian(params(), spec, Tier::Effective);
    const Matrix h = gen.at(0.0).dense();
    for (int j = 1; j <= 3; ++j) {
        const Matrix n = number_operator(j, spec).dense();
        CHECK((h * n - n * h).cwiseAbs().maxCoeff() < 1e-12);
    }
    const Matrix pe = embed(Matrix(qutrit_transition(Level::e, Level::e)), 0, spec).dense();
    CHECK((h * pe - pe * h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("full tier carries the documented off-diagonal block count") {
    const HilbertSpec spec(3, 2);
    const auto gen = hamiltonian(params(), spec, Tier::Full);
    // 3 + 3 + 3 couplings plus 3 crosstalk pairs, each with its adjoint
    CHECK(gen.n_offdiagonal_blocks() == 24);
    CHECK(gen.at(0.0).hermiticity_residual() < 1e-12);

    HamiltonianOptions opts;
    opts.drop_gprime = true;
    const auto dropped = hamiltonian(params(), spec, Tier::Full, Frame::Interaction, opts);
    CHECK(dropped.n_offdiagonal_blocks() == 18);
}

TEST_CASE("interaction picture of the static frame reproduces the full tier") {
    const HilbertSpec spec(3, 2);  // dense check at small cutoff
    const auto lab = hamiltonian(params(), spec, Tier::Lab, Frame::Lab);
    const auto full = hamiltonian(params(), spec, Tier::Full);
    const Eigen::VectorXd d = h0_diagonal(params(), spec);
    const Matrix coupling = lab.at(0.0).dense() - Matrix(d.cast<Complex>().asDiagonal());

    RandomStream rs(5, 0);
    for (int k = 0; k < 5; ++k) {
        const double t = rs.uniform() * 2e-6;
        Matrix rotated(spec.dim(), spec.dim());
        for (std::int64_t i = 0; i < spec.dim(); ++i)
            for (std::int64_t j = 0; j < spec.dim(); ++j)
                rotated(i, j) = std::polar(1.0, (d(i) - d(j)) * t) * coupling(i, j);
        const Matrix ref = full.at(t).dense();
        CHECK((rotated - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("tier and frame combinations are guarded") {
    const HilbertSpec spec(3, 2);
    CHECK_THROWS(hamiltonian(params(), spec, Tier::Effective, Frame::Lab));
    CHECK_THROWS(hamiltonian(params(), spec, Tier::Lab, Frame::Interaction));
    CHECK_THROWS(hamiltonian(params(), spec, Tier::Full, Frame::Lab));
    const HilbertSpec wrong(2, 2);
    CHECK_THROWS(hamiltonian(params(), wrong, Tier::Full));
}

TEST_CASE("collapse channels: one per decay path, none at zero rate") {
    const HilbertSpec spec(3, 2);
    const auto ch = collapse_operators(params(), spec);
    CHECK(ch.size() == 8);  // 3 cavities + 3 relaxation paths + 2 dephasing

    DeviceParams quiet = params();
    quiet.kappa = {0.0, 0.0, 0.0};
    quiet.gamma_eg = quiet.gamma_fe = quiet.gamma_fg = 0.0;
    quiet.gamma_phi_e = quiet.gamma_phi_f = 0.0;
    CHECK(collapse_operators(quiet, spec).empty());
}

TEST_CASE("generator frequency and norm bounds are coherent") {
    const HilbertSpec spec(3, 2);
    const auto full = hamiltonian(params(), spec, Tier::Full);
    // fastest coefficient is the largest spurious-coupling detuning
    CHECK(full.max_frequency() == Approx(params().detuning_prime(3)).epsilon(1e-12));
    HamiltonianOptions opts;
    opts.drop_gprime = true;
    const auto dropped = hamiltonian(params(), spec, Tier::Full, Frame::Interaction, opts);
    CHECK(dropped.max_frequency() == Approx(params().detuning_tilde(3)).epsilon(1e-12));
    const auto eff = hamiltonian(params(), spec, Tier::Effective);
    CHECK(eff.max_frequency() == 0.0);
    CHECK(eff.is_static());
    CHECK(eff.norm_bound() > 0.0);
}
