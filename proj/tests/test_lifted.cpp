#include <doctest.h>

#include <random>

#include "l1ilc/lifted.hpp"
#include "l1ilc/state_space.hpp"
#include "support/oracles.hpp"

using namespace l1ilc;

TEST_CASE("two-step scalar unroll") {
    // x+ = a x + b r, y = x, N = 2 -> F = [[b, 0], [a b, b]]
    const double a = 0.8, b = 0.3;
    const Eigen::MatrixXd Ad = Eigen::MatrixXd::Constant(1, 1, a);
    const Eigen::MatrixXd Bd = Eigen::MatrixXd::Constant(1, 1, b);
    const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(1, 1);
    const LiftedSystem sys = build_lifted(Ad, Bd, C, 2, 0.1);
    CHECK(sys.F(0, 0) == doctest::Approx(b));
    CHECK(sys.F(0, 1) == 0.0);
    CHECK(sys.F(1, 0) == doctest::Approx(a * b));
    CHECK(sys.F(1, 1) == doctest::Approx(b));
}

TEST_CASE("discrete integrator fills a lower triangle of dt") {
    const double dt = 0.05;
    const LiftedSystem sys =
        build_lifted(Eigen::MatrixXd::Identity(1, 1),
                     Eigen::MatrixXd::Constant(1, 1, dt), Eigen::MatrixXd::Identity(1, 1), 3,
                     dt);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            CHECK(sys.F(i, j) == doctest::Approx(j <= i ? dt : 0.0));
        }
    }
}

TEST_CASE("reference model lifted map matches direct recursion") {
    const LiftedModel model = build_reference_model({1.1, 1.1, 1.75}, {0.4, 0.4, 0.4}, 0.02, 40);
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd r_cols(3, 40);
        for (int k = 0; k < 40; ++k) r_cols.col(k) = oracles::random_vec(3, rng);
        const Eigen::VectorXd y_rec = oracles::simulate_discrete(
            model.Ad, model.Bd, model.C, Eigen::VectorXd::Zero(6), r_cols);
        const Eigen::VectorXd y_lift = model.lifted.F * interleave(r_cols);
        CAPTURE(trial);
        CHECK((y_rec - y_lift).lpNorm<Eigen::Infinity>() < 1e-10);
    }
    CHECK(model.lifted.model_id.find("l1ref") == 0);
}

TEST_CASE("rank verification rejects a dead input channel") {
    const Eigen::MatrixXd Ad = Eigen::MatrixXd::Identity(1, 1);
    const Eigen::MatrixXd Bd = Eigen::MatrixXd::Zero(1, 1);
    const Eigen::MatrixXd C = Eigen::MatrixXd::Identity(1, 1);
    CHECK_THROWS_AS(build_lifted(Ad, Bd, C, 3, 0.1), std::invalid_argument);
}

TEST_CASE("causality: strictly upper entries are zero") {
    const LiftedModel model = build_reference_model({1.1, 1.75}, {0.4, 0.4}, 0.05, 12);
    const Eigen::MatrixXd upper = model.lifted.F.triangularView<Eigen::StrictlyUpper>();
    CHECK(upper.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("second difference stencil") {
    const Eigen::MatrixXd D = second_difference_matrix(4, 0.5);
    REQUIRE(D.rows() == 2);
    REQUIRE(D.cols() == 4);
    Eigen::MatrixXd expected(2, 4);
    expected << 4, -8, 4, 0, 0, 4, -8, 4;
    CHECK((D - expected).cwiseAbs().maxCoeff() == 0.0);
    CHECK_THROWS_AS(second_difference_matrix(2, 0.5), std::invalid_argument);

    SUBCASE("quadratic samples map to the constant second derivative") {
        const double dt = 0.1;
        const Eigen::MatrixXd Dq = second_difference_matrix(10, dt);
        Eigen::VectorXd r(10);
        for (int k = 0; k < 10; ++k) r(k) = (k * dt) * (k * dt);
        const Eigen::VectorXd dd = Dq * r;
        for (long i = 0; i < dd.size(); ++i) {
            CHECK(dd(i) == doctest::Approx(2.0).epsilon(1e-9));
        }
    }
    SUBCASE("linear samples map to zero") {
        const Eigen::MatrixXd Dl = second_difference_matrix(10, 0.1);
        Eigen::VectorXd r(10);
        for (int k = 0; k < 10; ++k) r(k) = 3.0 * k * 0.1;
        CHECK((Dl * r).lpNorm<Eigen::Infinity>() < 1e-10);
    }
}

TEST_CASE("interleaved second difference acts per axis") {
    const Eigen::MatrixXd D = second_difference_matrix_interleaved(5, 0.5, 3);
    CHECK(D.rows() == 9);
    CHECK(D.cols() == 15);
    std::mt19937_64 rng(4);
    Eigen::MatrixXd traj(3, 5);
    for (int k = 0; k < 5; ++k) traj.col(k) = oracles::random_vec(3, rng);
    const Eigen::VectorXd dd = D * interleave(traj);
    const Eigen::MatrixXd per_axis = second_difference_matrix(5, 0.5);
    for (int a = 0; a < 3; ++a) {
        const Eigen::VectorXd expect = per_axis * traj.row(a).transpose();
        for (int i = 0; i < 3; ++i) {
            CHECK(dd(3 * i + a) == doctest::Approx(expect(i)).epsilon(1e-12));
        }
    }
}

TEST_CASE("tracking error") {
    Eigen::MatrixXd r(3, 4), y(3, 4);
    r.setZero();
    y.setZero();
    CHECK(tracking_error(r, y) == 0.0);

    y.row(0).setConstant(0.1);
    CHECK(tracking_error(r, y) == doctest::Approx(0.1));

    y.row(0).setConstant(0.03);
    y.row(1).setConstant(0.04);
    CHECK(tracking_error(r, y) == doctest::Approx(0.05));

    Eigen::MatrixXd bad(3, 3);
    CHECK_THROWS_AS(tracking_error(r, bad), std::invalid_argument);
}

TEST_CASE("model inversion round trips a known input") {
    const LiftedModel model = build_reference_model({1.1, 1.1, 1.75}, {0.4, 0.4, 0.4}, 0.02, 30);
    std::mt19937_64 rng(21);
    const Eigen::VectorXd r_known = oracles::random_vec(model.lifted.input_dim(), rng);
    const Eigen::VectorXd y_star = model.lifted.F * r_known;
    const ReferenceModelInput out =
        reference_model_input(model, y_star, Eigen::VectorXd::Zero(6));
    CHECK((out.r_2_1 - r_known).lpNorm<Eigen::Infinity>() < 1e-8);

    SUBCASE("zero target from rest gives the zero input") {
        const ReferenceModelInput z = reference_model_input(
            model, Eigen::VectorXd::Zero(model.lifted.output_dim()), Eigen::VectorXd::Zero(6));
        CHECK(z.r_2_1.lpNorm<Eigen::Infinity>() < 1e-12);
    }
}

TEST_CASE("model inversion cancels a nonzero initial state") {
    const LiftedModel model = build_reference_model({1.1, 1.1, 1.75}, {0.4, 0.4, 0.4}, 0.02, 50);
    Eigen::VectorXd x0(6);
    x0 << 0.4, -0.1, 0.2, 0.05, -0.3, 0.0;
    const ReferenceModelInput out = reference_model_input(
        model, Eigen::VectorXd::Zero(model.lifted.output_dim()), x0);
    // Forward-simulating the discrete model with this input must hold the
    // output at zero.
    const Eigen::VectorXd y = oracles::simulate_discrete(
                                  model.Ad, model.Bd, model.C, x0, deinterleave(out.r_2_1, 3)) ;
    CHECK(y.lpNorm<Eigen::Infinity>() <= 1e-6);
}

TEST_CASE("naive initial input is the identity") {
    Eigen::VectorXd y(5);
    y << 1, 2, 3, 4, 5;
    const Eigen::VectorXd r = naive_initial_input(y);
    CHECK((r - y).lpNorm<Eigen::Infinity>() == 0.0);
    CHECK(r.size() == y.size());
}

TEST_CASE("axis permutation permutes the lifted map identically") {
    // Block-diagonal structure: permuting the axis order of the model and of
    // the inputs permutes the outputs the same way.
    const std::vector<double> m{1.1, 1.4, 1.75};
    const std::vector<double> k{0.4, 0.5, 0.6};
    const LiftedModel fwd = build_reference_model(m, k, 0.05, 8);
    const LiftedModel rev = build_reference_model({m[2], m[1], m[0]}, {k[2], k[1], k[0]}, 0.05, 8);

    std::mt19937_64 rng(12);
    Eigen::MatrixXd r_cols(3, 8);
    for (int i = 0; i < 8; ++i) r_cols.col(i) = oracles::random_vec(3, rng);
    Eigen::MatrixXd r_swapped = r_cols.colwise().reverse();  // rows reversed below
    r_swapped = r_cols;
    r_swapped.row(0).swap(r_swapped.row(2));

    const Eigen::MatrixXd y_fwd = deinterleave(fwd.lifted.F * interleave(r_cols), 3);
    Eigen::MatrixXd y_rev = deinterleave(rev.lifted.F * interleave(r_swapped), 3);
    y_rev.row(0).swap(y_rev.row(2));
    CHECK((y_fwd - y_rev).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("baseline closed-loop model tracks a fine RK4 simulation") {
    // Independent route: integrate the continuous PD loop directly with RK4
    // under zero-order-hold r2 and the matching backward-difference r2dot.
    const RationalTF plant_tf({2.5}, {2.5, 3.5, 1.0});
    const double dt = 0.05;
    const int N = 30;
    const double gd = 1.75, gp = 1.5625;
    const LiftedModel model =
        build_baseline_model({plant_tf, plant_tf, plant_tf}, gd, gp, 0.0, dt, N, "pd-test");

    std::mt19937_64 rng(77);
    Eigen::MatrixXd r_cols(3, N);
    for (int i = 0; i < N; ++i) r_cols.col(i) = 0.2 * oracles::random_vec(3, rng);
    Eigen::MatrixXd rd_cols(3, N);
    rd_cols.col(0) = r_cols.col(0) / dt;
    for (int i = 1; i < N; ++i) rd_cols.col(i) = (r_cols.col(i) - r_cols.col(i - 1)) / dt;

    const StateSpace p = to_state_space(plant_tf);
    const int sub = 200;
    const double h = dt / sub;
    std::array<Eigen::VectorXd, 3> xp;
    Eigen::Vector3d y1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d y2 = Eigen::Vector3d::Zero();
    for (auto& x : xp) x = p.zero_state();

    Eigen::VectorXd y_sim(3 * N);
    for (int s = 0; s < N; ++s) {
        for (int c = 0; c < sub; ++c) {
            for (int a = 0; a < 3; ++a) {
                auto deriv = [&](const Eigen::VectorXd& xs, double y2s) {
                    const double y1s = (p.C * xs)(0, 0);
                    const double u = gd * (rd_cols(a, s) - y1s) + gp * (r_cols(a, s) - y2s);
                    Eigen::VectorXd dx = p.A * xs + p.B * u;
                    return std::make_pair(std::move(dx), y1s);
                };
                Eigen::VectorXd& x = xp[static_cast<size_t>(a)];
                const auto [k1x, k1y] = deriv(x, y2(a));
                const auto [k2x, k2y] = deriv(x + 0.5 * h * k1x, y2(a) + 0.5 * h * k1y);
                const auto [k3x, k3y] = deriv(x + 0.5 * h * k2x, y2(a) + 0.5 * h * k2y);
                const auto [k4x, k4y] = deriv(x + h * k3x, y2(a) + h * k3y);
                x += (h / 6.0) * (k1x + 2 * k2x + 2 * k3x + k4x);
                y2(a) += (h / 6.0) * (k1y + 2 * k2y + 2 * k3y + k4y);
                y1(a) = (p.C * x)(0, 0);
            }
        }
        for (int a = 0; a < 3; ++a) y_sim(3 * s + a) = y2(a);
    }

    const Eigen::VectorXd y_lift = model.lifted.F * interleave(r_cols);
    CHECK((y_lift - y_sim).lpNorm<Eigen::Infinity>() < 1e-8);
}
