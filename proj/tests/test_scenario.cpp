#include <doctest.h>

#include <cstdlib>

#include "l1ilc/scenario.hpp"

using namespace l1ilc;

TEST_CASE("trajectory endpoints, timing and feasibility") {
    TrajectorySpec traj;
    CHECK((traj.position(0.0) - traj.start).norm() == 0.0);
    CHECK((traj.position(traj.duration) - traj.end).norm() < 1e-12);
    CHECK((traj.position(2.0 * traj.duration) - traj.end).norm() < 1e-12);
    CHECK(traj.velocity(0.0).norm() == 0.0);
    CHECK(traj.velocity(traj.duration).norm() < 1e-12);
    CHECK(traj.dt() == doctest::Approx(0.02));
    CHECK(traj.peak_speed() ==
          doctest::Approx((traj.end - traj.start).norm() * 15.0 / 8.0 / traj.duration));

    const Eigen::MatrixXd r = traj.nominal_input();
    const Eigen::MatrixXd y = traj.desired_output();
    CHECK(r.cols() == 400);
    CHECK((r.col(0) - traj.start).norm() == 0.0);
    CHECK((y.col(399) - traj.end).norm() < 1e-12);
    // Output samples lead input samples by one period.
    CHECK((y.col(10) - r.col(11)).norm() < 1e-12);
}

TEST_CASE("parsing round trip with comments and whitespace") {
    const std::string text = R"(
# demo scenario
plant = fast
controller = pid     # baseline
iterations = 7
repetitions = 2
seed = 99
init_mode = reference_model
trajectory_start = 0 0 1
trajectory_end = 1 1 2
trajectory_duration = 4
trajectory_samples = 200
gamma = 4000
m = 1.2 1.2 1.6
wind_axis = y
wind_magnitude = 0.4
wind_from_iteration = 3
trace = true
)";
    const ScenarioConfig cfg = parse_scenario(text, "demo");
    CHECK(cfg.plant == "fast");
    CHECK(cfg.controller == ControllerKind::pid);
    CHECK(cfg.iterations == 7);
    CHECK(cfg.repetitions == 2);
    CHECK(cfg.seed == 99);
    CHECK(cfg.init_mode == InitMode::reference_model);
    CHECK(cfg.trajectory.duration == 4.0);
    CHECK(cfg.trajectory.samples == 200);
    CHECK(cfg.gamma == 4000.0);
    CHECK(cfg.m(2) == 1.6);
    CHECK(cfg.wind_axis == 1);
    CHECK(cfg.wind_from_iteration == 3);
    CHECK(cfg.trace);
}

TEST_CASE("unknown keys and malformed lines are rejected") {
    CHECK_THROWS_AS(parse_scenario("bogus_key = 1\n", "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("plant slow\n", "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("controller = fuzzy\n", "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("wind_axis = q\n", "x"), std::invalid_argument);
    CHECK_THROWS_AS(parse_scenario("iterations = 0\n", "x"), std::invalid_argument);
    // Sample period must divide the controller period evenly.
    CHECK_THROWS_AS(
        parse_scenario("trajectory_duration = 1\ntrajectory_samples = 301\n", "x"),
        std::invalid_argument);
    // Wind beyond the Lipschitz offset bound.
    CHECK_THROWS_AS(parse_scenario("wind_axis = y\nwind_magnitude = 5\n", "x"),
                    std::invalid_argument);
}

TEST_CASE("environment variables override seed and output directory") {
    setenv("L1ILC_SEED", "777", 1);
    setenv("L1ILC_OUT_DIR", "/tmp/l1ilc-test-out", 1);
    const ScenarioConfig cfg = parse_scenario("seed = 5\n", "env");
    unsetenv("L1ILC_SEED");
    unsetenv("L1ILC_OUT_DIR");
    CHECK(cfg.seed == 777);
    CHECK(cfg.out_dir == "/tmp/l1ilc-test-out");
}

TEST_CASE("derived builders") {
    ScenarioConfig cfg;
    cfg.trajectory.samples = 100;
    cfg.trajectory.duration = 2.0;

    SUBCASE("plant presets and perturbation") {
        CHECK(cfg.plant_config().name == "slow");
        cfg.plant = "fast";
        CHECK(cfg.plant_config().name == "fast");
        cfg.plant_perturb = 0.05;
        const PlantConfig pc = cfg.plant_config();
        CHECK(pc.name == "fast+perturbed");
        CHECK(pc.axis_tf[0].den[0] == doctest::Approx(25.0 * 1.05 / 1.0));
    }

    SUBCASE("axis configs pick preset cutoffs when omega is zero") {
        cfg.plant = "fast";
        const std::vector<L1AxisConfig> axes = cfg.l1_axes();
        CHECK(axes[0].omega == 23.0);
        CHECK(axes[2].omega == 3.8);
        cfg.omega = Eigen::Vector3d(5.0, 5.0, 5.0);
        CHECK(cfg.l1_axes()[0].omega == 5.0);
    }

    SUBCASE("sigma bound is sized from the disturbance") {
        CHECK(cfg.effective_sigma_bound() ==
              doctest::Approx(10.0 * (0.6 + 0.5 * std::max(1.0, cfg.trajectory.peak_speed()))));
        cfg.sigma_bound = 3.0;
        CHECK(cfg.effective_sigma_bound() == 3.0);
    }

    SUBCASE("wind schedule honors the start iteration and stays deterministic") {
        cfg.wind_axis = 1;
        cfg.wind_magnitude = 0.3;
        cfg.wind_from_iteration = 5;
        cfg.wind_iter_noise = 0.05;
        CHECK(cfg.disturbance_for(4, 0).wind_axis == -1);
        const DisturbanceSpec a = cfg.disturbance_for(5, 0);
        const DisturbanceSpec b = cfg.disturbance_for(5, 0);
        CHECK(a.wind_axis == 1);
        CHECK(a.wind_magnitude == b.wind_magnitude);
        CHECK(a.wind_magnitude != cfg.disturbance_for(6, 0).wind_magnitude);
    }

    SUBCASE("nominal model follows the controller kind") {
        CHECK(cfg.nominal_model().lifted.model_id.find("l1ref") == 0);
        cfg.controller = ControllerKind::pd;
        CHECK(cfg.nominal_model().lifted.model_id.find("pdloop") == 0);
        cfg.controller = ControllerKind::pid;
        CHECK(cfg.nominal_model().lifted.model_id.find("pidloop") == 0);
    }
}
