#include <doctest.h>

#include <random>
#include <stdexcept>

#include "l1ilc/baselines.hpp"

using namespace l1ilc;

TEST_CASE("pd law") {
    PdConfig cfg;
    cfg.tau = 1.0;
    cfg.zeta = 0.5;
    CHECK(pd_step(cfg, 1.0, 0.0, 0.0, 1.0) == 0.0);            // equilibrium
    CHECK(pd_step(cfg, 1.0, 0.0, 0.0, 0.0) == doctest::Approx(1.0));
    CHECK(pd_step(cfg, 2.0, 2.0, 0.0, 0.0) ==
          doctest::Approx(2.0 * pd_step(cfg, 1.0, 1.0, 0.0, 0.0)));

    // Stateless: identical calls give identical outputs.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double r2 = u(rng), rd = u(rng), y1 = u(rng), y2 = u(rng);
        CHECK(pd_step(cfg, r2, rd, y1, y2) == pd_step(cfg, r2, rd, y1, y2));
    }
    PdConfig bad;
    bad.tau = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("pid law with clamped integrator") {
    PidConfig cfg = PidConfig::from_tau_zeta(0.8, 0.7);
    CHECK(cfg.alpha == doctest::Approx(0.8 * 2.4));
    CHECK(cfg.beta == doctest::Approx(0.64 * 2.4));
    CHECK(cfg.gamma == doctest::Approx(0.512));

    PidState st;
    CHECK(pid_step(cfg, st, 0.0, 0.0, 0.0, 0.0, 0.01) == 0.0);

    SUBCASE("rectangle-rule integral of a constant error") {
        PidState s2;
        const double e = 0.3, dt = 0.01, T = 2.0;
        double u_out = 0.0;
        for (int i = 0; i < static_cast<int>(T / dt); ++i) {
            u_out = pid_step(cfg, s2, e, 0.0, 0.0, 0.0, dt);
        }
        const double integral_term = u_out - cfg.beta * e;
        CHECK(integral_term ==
              doctest::Approx(cfg.gamma * e * T).epsilon(dt * cfg.gamma * e));
    }
    SUBCASE("integrator pinned at the limit") {
        PidState s3;
        s3.integrator = cfg.integrator_limit;
        const double before = s3.integrator;
        pid_step(cfg, s3, 1.0, 0.0, 0.0, 0.0, 0.01);  // positive error
        CHECK(s3.integrator == before);
    }
    SUBCASE("negative dt rejected") {
        PidState s4;
        CHECK_THROWS_AS(pid_step(cfg, s4, 0, 0, 0, 0, 0.0), std::invalid_argument);
    }
}

TEST_CASE("pid with zero integral gain reduces to pd") {
    PdConfig pd;
    pd.tau = 0.8;
    pd.zeta = 0.7;
    PidConfig pid;
    pid.alpha = pd.gain_d();
    pid.beta = pd.gain_p();
    pid.gamma = 0.0;
    pid.integrator_limit = 1.0;

    PidState st;
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const double r2 = u(rng), rd = u(rng), y1 = u(rng), y2 = u(rng);
        CHECK(pid_step(pid, st, r2, rd, y1, y2, 1e-3) ==
              doctest::Approx(pd_step(pd, r2, rd, y1, y2)).epsilon(1e-15));
    }
}
