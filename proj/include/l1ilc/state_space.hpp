#pragma once

#include <Eigen/Dense>

#include "l1ilc/transfer_function.hpp"

namespace l1ilc {

/// Continuous-time state-space realization x' = Ax + Bu, y = Cx + Du.
struct StateSpace {
    Eigen::MatrixXd A;
    Eigen::MatrixXd B;
    Eigen::MatrixXd C;
    Eigen::MatrixXd D;

    int order() const { return static_cast<int>(A.rows()); }
    Eigen::VectorXd zero_state() const { return Eigen::VectorXd::Zero(order()); }
};

/// Controllable-canonical realization of a proper rational transfer function.
StateSpace to_state_space(const RationalTF& g);

/// One 4th-order Runge-Kutta step under zero-order-hold input.
/// Returns the state at t+dt and the output evaluated there.
std::pair<Eigen::VectorXd, double> simulate_tf_step(const StateSpace& ss,
                                                    const Eigen::VectorXd& x,
                                                    double u,
                                                    double dt);

/// Matrix exponential by scaling-and-squaring with a Pade approximant.
Eigen::MatrixXd expm(const Eigen::MatrixXd& M);

/// Exact zero-order-hold discretization of (A, B) at step dt.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_zoh(const Eigen::MatrixXd& A,
                                                           const Eigen::MatrixXd& B,
                                                           double dt);

}  // namespace l1ilc
