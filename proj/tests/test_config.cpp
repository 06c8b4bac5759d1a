// test_config.cpp — JSON parameter loading, strict keys, unit conversion,
// and dump/reload round trips.

#include <doctest.h>

#include <cmath>

#include "catgate/config.hpp"

using namespace catgate;
using doctest::Approx;

#ifndef CATGATE_SOURCE_DIR
#define CATGATE_SOURCE_DIR "."
#endif

TEST_CASE("bundled preset matches the built-in parameter set") {
    const auto cfg = load_config(std::string(CATGATE_SOURCE_DIR) + "/configs/table1.json");
    const auto ref = table1_params();
    CHECK(cfg.params.n == ref.n);
    CHECK(cfg.params.alpha == Approx(ref.alpha).epsilon(1e-15));
    CHECK(cfg.params.omega_eg == Approx(ref.omega_eg).epsilon(1e-15));
    for (int j = 0; j < 3; ++j) {
        CHECK(cfg.params.omega_c[static_cast<size_t>(j)] == Approx(ref.omega_c[static_cast<size_t>(j)]).epsilon(1e-15));
        CHECK(cfg.params.g[static_cast<size_t>(j)] == Approx(ref.g[static_cast<size_t>(j)]).epsilon(1e-12));
        CHECK(cfg.params.g_tilde[static_cast<size_t>(j)] == Approx(ref.g_tilde[static_cast<size_t>(j)]).epsilon(1e-12));
        CHECK(cfg.params.g_prime[static_cast<size_t>(j)] == Approx(ref.g_prime[static_cast<size_t>(j)]).epsilon(1e-12));
    }
    CHECK(cfg.params.gamma_eg == Approx(ref.gamma_eg).epsilon(1e-15));
    CHECK(cfg.kappa_inv == Approx(45e-6).epsilon(1e-15));
}

TEST_CASE("dump and reload reproduce the parameters exactly") {
    const auto cfg = default_config();
    const auto text = dump_config(cfg);
    const auto again = parse_config(text, "roundtrip");
    CHECK(again.params.omega_eg == cfg.params.omega_eg);
    CHECK(again.params.omega_fe == cfg.params.omega_fe);
    CHECK(again.params.alpha == cfg.params.alpha);
    for (int j = 0; j < 3; ++j) {
        CHECK(again.params.omega_c[static_cast<size_t>(j)] == cfg.params.omega_c[static_cast<size_t>(j)]);
        CHECK(again.params.g_tilde[static_cast<size_t>(j)] ==
              Approx(cfg.params.g_tilde[static_cast<size_t>(j)]).epsilon(1e-15));
    }
    CHECK(again.params.gamma_phi_f == Approx(cfg.params.gamma_phi_f).epsilon(1e-15));
    CHECK(again.kappa_inv == Approx(cfg.kappa_inv).epsilon(1e-15));

    // a second dump/reload generation stays on the same parameters
    const auto third = parse_config(dump_config(again), "roundtrip2");
    CHECK(third.params.omega_eg == again.params.omega_eg);
    for (int j = 0; j < 3; ++j)
        CHECK(third.params.omega_c[static_cast<size_t>(j)] ==
              Approx(again.params.omega_c[static_cast<size_t>(j)]).epsilon(1e-15));
}

TEST_CASE("unknown keys are rejected with their path") {
    const char* text = R"({
      "alpha": 1.25,
      "qutrit_ghz": {"omega_eg": 4.0, "omega_fe": 3.3, "omega_fg": 7.3},
      "cavities_ghz": [3.24],
      "couplings_mhz": {"g1": 4.5},
      "coupling_rules": {"matching_c": 0, "g_tilde_over_g": 0.7, "g_prime_over_g": 0.01, "g_cross_over_gmax": 0.01},
      "decoherence_us": {"gamma_eg_inv": 60, "gamma_fe_inv": 30, "gamma_fg_inv": 150,
                          "gamma_phi_e_inv": 20, "gamma_phi_f_inv": 20, "kappa_inv": 45},
      "surprise": 1
    })";
    CHECK_THROWS_WITH_AS(parse_config(text, "t"), doctest::Contains("surprise"), std::invalid_argument);
}

TEST_CASE("malformed and inconsistent inputs are rejected") {
    CHECK_THROWS(parse_config("{", "t"));
    CHECK_THROWS(parse_config("{}", "t"));
    CHECK_THROWS(load_config("/nonexistent/file.json"));

    // level diagram must close: omega_fg != omega_eg + omega_fe
    const char* bad_level = R"({
      "alpha": 1.25,
      "qutrit_ghz": {"omega_eg": 4.0, "omega_fe": 3.3, "omega_fg": 7.0},
      "cavities_ghz": [3.24],
      "couplings_mhz": {"g1": 4.5},
      "coupling_rules": {"matching_c": 0, "g_tilde_over_g": 0.7, "g_prime_over_g": 0.01, "g_cross_over_gmax": 0.01},
      "decoherence_us": {"gamma_eg_inv": 60, "gamma_fe_inv": 30, "gamma_fg_inv": 150,
                          "gamma_phi_e_inv": 20, "gamma_phi_f_inv": 20, "kappa_inv": 45}
    })";
    CHECK_THROWS(parse_config(bad_level, "t"));

    // negative decay time
    const char* bad_rate = R"({
      "alpha": 1.25,
      "qutrit_ghz": {"omega_eg": 4.0, "omega_fe": 3.3, "omega_fg": 7.3},
      "cavities_ghz": [3.24],
      "couplings_mhz": {"g1": 4.5},
      "coupling_rules": {"matching_c": 0, "g_tilde_over_g": 0.7, "g_prime_over_g": 0.01, "g_cross_over_gmax": 0.01},
      "decoherence_us": {"gamma_eg_inv": -60, "gamma_fe_inv": 30, "gamma_fg_inv": 150,
                          "gamma_phi_e_inv": 20, "gamma_phi_f_inv": 20, "kappa_inv": 45}
    })";
    CHECK_THROWS(parse_config(bad_rate, "t"));
}

TEST_CASE("matching deviation in the file scales the couplings") {
    const char* text = R"({
      "alpha": 1.25,
      "qutrit_ghz": {"omega_eg": 4.0, "omega_fe": 3.3, "omega_fg": 7.3},
      "cavities_ghz": [3.24, 3.21, 3.18],
      "couplings_mhz": {"g1": 4.5},
      "coupling_rules": {"matching_c": 0.05, "g_tilde_over_g": 0.7071067811865476,
                          "g_prime_over_g": 0.01, "g_cross_over_gmax": 0.01},
      "decoherence_us": {"gamma_eg_inv": 60, "gamma_fe_inv": 30, "gamma_fg_inv": 150,
                          "gamma_phi_e_inv": 20, "gamma_phi_f_inv": 20, "kappa_inv": 45}
    })";
    const auto cfg = parse_config(text, "t");
    CHECK(cfg.params.c_mismatch == Approx(0.05));
    CHECK(cfg.params.g[2] / (kTwoPi * 1e6) == Approx(6.5292862509901050).epsilon(1e-12));
}
