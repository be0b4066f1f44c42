#pragma once

#include <Eigen/Dense>

#include <memory>
#include <string>

#include "l1ilc/lifted.hpp"
#include "l1ilc/qp.hpp"

namespace l1ilc {

/// Cost and estimator weights of the learning update. Q = q I weights the
/// predicted output error, W = r_w I + s_w D'D the input and its acceleration;
/// eta and eps are the process and measurement noise variances of the
/// iteration-domain filter.
struct IlcWeights {
    double q = 1.0;
    double r_w = 0.001;
    double s_w = 0.0025;
    double eta = 1e-3;
    double eps = 1e-1;

    void validate() const;
};

/// Acceleration bounds on the total reference input. D acts on the deviation;
/// the nominal contribution is precomputed into d_nominal so the bounds stay
/// physical while the decision variable stays the deviation.
struct Constraints {
    Eigen::MatrixXd D;          // second-difference rows, interleaved layout
    Eigen::VectorXd ddr_low;    // per row
    Eigen::VectorXd ddr_hi;
    Eigen::VectorXd d_nominal;  // D * r_nominal

    void validate() const;
};

Constraints make_acceleration_constraints(int N, double dt, int n_axes, double lo, double hi,
                                          const Eigen::VectorXd& r_nominal);

/// Per-iteration learning state: the transferable artifact. All vectors use
/// the interleaved lifted layout of the owning LiftedSystem.
struct LearningState {
    Eigen::VectorXd r_bar;   // input deviation applied next iteration
    Eigen::VectorXd d_hat;   // disturbance estimate
    Eigen::VectorXd p_cov;   // estimate covariance diagonal
    int iteration = 0;
    std::string model_id;
};

LearningState make_initial_state(const LiftedSystem& sys, double p0 = 1.0);

/// Measurement update of the iteration-domain filter. y_dev is the lifted
/// measured output deviation of the iteration that applied state.r_bar.
void kalman_update(LearningState& state, const LiftedSystem& sys, const IlcWeights& w,
                   const Eigen::VectorXd& y_dev);

/// Precomputed quadratic program shared across iterations: the cost matrix
/// q F'F + W and its factorization depend only on the scenario.
struct IlcPlan {
    Eigen::MatrixXd H;
    Eigen::MatrixXd A_ineq;
    Eigen::VectorXd b_ineq;
    Eigen::MatrixXd W;
    double q = 1.0;
    std::shared_ptr<QpFactorization> hfac;
};

IlcPlan make_ilc_plan(const LiftedSystem& sys, const IlcWeights& w, const Constraints& cons);

/// One constrained input update: minimizes the predicted-error/effort cost
/// subject to the acceleration bounds and stores the next deviation in
/// state.r_bar, advancing the iteration counter. Returns the QP solution.
QpSolution ilc_update(LearningState& state, const LiftedSystem& sys, const IlcWeights& w,
                      const Constraints& cons);
QpSolution ilc_update(LearningState& state, const LiftedSystem& sys, const IlcPlan& plan);

}  // namespace l1ilc
