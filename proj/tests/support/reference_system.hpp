#pragma once

// Simulator of the closed-loop reference system that the adaptive controller
// is supposed to emulate:
//   y1_ref = H(s) [ C(s) r1_ref + (1 - C(s)) d_ref ],
//   y2_ref = integral of y1_ref,  r1_ref = K (r2 - y2_ref),
//   d_ref  = f(t, y1_ref).
// This is an independent route: it never touches the controller, predictor or
// adaptation code, only the composed transfer functions and an RK4 stepper.

#include <Eigen/Dense>

#include "l1ilc/l1_norm.hpp"
#include "l1ilc/plant.hpp"
#include "l1ilc/state_space.hpp"
#include "l1ilc/transfer_function.hpp"

namespace refsys {

struct AxisBlocks {
    l1ilc::StateSpace hc;    // H(s) C(s)
    l1ilc::StateSpace h1c;   // H(s) (1 - C(s))
    double K = 0.0;
};

inline AxisBlocks make_axis(const l1ilc::RationalTF& A, double m, double omega, double K) {
    const l1ilc::RationalTF M = l1ilc::RationalTF::first_order_lowpass(m);
    const l1ilc::RationalTF C = l1ilc::RationalTF::first_order_lowpass(omega);
    const l1ilc::RationalTF H = l1ilc::compose_H(A, M, C);
    AxisBlocks b;
    b.hc = l1ilc::to_state_space(l1ilc::tf_mul(H, C));
    b.h1c = l1ilc::to_state_space(l1ilc::compose_G(H, C));
    b.K = K;
    return b;
}

/// Simulates the reference system for an axis-major ZOH input r2 (3 x N held
/// over sample_dt) and returns y2_ref sampled at the same instants (3 x N).
inline Eigen::MatrixXd simulate(const std::array<AxisBlocks, 3>& blocks,
                                const l1ilc::DisturbanceSpec& dist,
                                const Eigen::MatrixXd& r2, double sample_dt,
                                const Eigen::Vector3d& y2_init, double sim_dt) {
    const int N = static_cast<int>(r2.cols());
    const int sub = static_cast<int>(std::round(sample_dt / sim_dt));
    Eigen::MatrixXd y2_sampled(3, N);

    std::array<Eigen::VectorXd, 3> x_hc, x_h1c;
    Eigen::Vector3d y1 = Eigen::Vector3d::Zero();
    Eigen::Vector3d y2 = y2_init;
    for (int a = 0; a < 3; ++a) {
        x_hc[static_cast<size_t>(a)] = blocks[static_cast<size_t>(a)].hc.zero_state();
        x_h1c[static_cast<size_t>(a)] = blocks[static_cast<size_t>(a)].h1c.zero_state();
    }

    double t = 0.0;
    for (int s = 0; s < N; ++s) {
        for (int c = 0; c < sub; ++c) {
            for (int a = 0; a < 3; ++a) {
                const AxisBlocks& b = blocks[static_cast<size_t>(a)];
                // Inputs held over the substep; both blocks are strictly
                // proper, so there is no algebraic loop through y1.
                const double r1 = b.K * (r2(a, s) - y2(a));
                const double d = dist.value(a, t, y1(a));
                auto [xh, yh] = l1ilc::simulate_tf_step(b.hc, x_hc[static_cast<size_t>(a)], r1, sim_dt);
                auto [xg, yg] =
                    l1ilc::simulate_tf_step(b.h1c, x_h1c[static_cast<size_t>(a)], d, sim_dt);
                x_hc[static_cast<size_t>(a)] = std::move(xh);
                x_h1c[static_cast<size_t>(a)] = std::move(xg);
                const double y1_new = yh + yg;
                y2(a) += 0.5 * sim_dt * (y1(a) + y1_new);  // trapezoidal integrator
                y1(a) = y1_new;
            }
            t += sim_dt;
        }
        y2_sampled.col(s) = y2;
    }
    return y2_sampled;
}

}  // namespace refsys
