#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "l1ilc/transfer_function.hpp"

namespace l1ilc {

/// Static trial-domain map of one iteration: stacked outputs y(1..N) as a
/// linear function of stacked inputs r(0..N-1). Lower block triangular by
/// causality; inputs and outputs of the per-step axes are interleaved.
struct LiftedSystem {
    Eigen::MatrixXd F;
    int samples = 0;   // N
    double dt = 0.0;
    int n_in = 1;      // inputs per step
    int n_out = 1;     // outputs per step
    std::string model_id;

    long input_dim() const { return static_cast<long>(samples) * n_in; }
    long output_dim() const { return static_cast<long>(samples) * n_out; }
};

/// Builds the lifted map of the time-varying discrete system
///   x(k+1) = A(k) x(k) + B(k) r(k),  y(k) = C x(k),
/// for k = 0..N-1. Verifies full row rank at construction.
LiftedSystem build_lifted(const std::vector<Eigen::MatrixXd>& A_seq,
                          const std::vector<Eigen::MatrixXd>& B_seq,
                          const Eigen::MatrixXd& C_out, int N, double dt);

/// Time-invariant convenience overload.
LiftedSystem build_lifted(const Eigen::MatrixXd& Ad, const Eigen::MatrixXd& Bd,
                          const Eigen::MatrixXd& C_out, int N, double dt);

/// (N-2) x N central second-difference stencil scaled by 1/dt^2.
Eigen::MatrixXd second_difference_matrix(int N, double dt);

/// Second-difference stencil acting per axis on an interleaved N*n_axes vector.
Eigen::MatrixXd second_difference_matrix_interleaved(int N, double dt, int n_axes);

/// Mean pointwise Euclidean distance between two 3xN position traces.
double tracking_error(const Eigen::MatrixXd& r2, const Eigen::MatrixXd& y2);

/// Discrete closed-loop model used as the ILC nominal plant, together with the
/// matrices needed for free-response stacking.
struct LiftedModel {
    Eigen::MatrixXd Ad;   // n_x x n_x
    Eigen::MatrixXd Bd;   // n_x x n_in
    Eigen::MatrixXd C;    // n_out x n_x
    LiftedSystem lifted;
};

/// Closed loop of the first-order reference dynamics behind a proportional
/// position loop: per axis x = [y2, y1], x' = [[0,1],[-K m,-m]] x + [0; K m] r2.
/// Discretized exactly at dt and lifted over N samples.
LiftedModel build_reference_model(const std::vector<double>& m_axes,
                                  const std::vector<double>& k_axes, double dt, int N);

/// Closed loop of a PD/PID position controller around a known per-axis plant,
/// discretized exactly. The derivative feedforward path enters the lifted map
/// through a causal backward difference of the input sequence.
LiftedModel build_baseline_model(const std::vector<RationalTF>& plant_axes,
                                 double gain_d, double gain_p, double gain_i,
                                 double dt, int N, const std::string& model_id);

/// Model-inversion initial input of the reference model:
/// r = F^{-1}(y* - d0) with d0 the stacked free response from x0, and
/// d1 = F (r - y*). y* and the result are interleaved lifted vectors.
struct ReferenceModelInput {
    Eigen::VectorXd r_2_1;
    Eigen::VectorXd d_1;
    Eigen::VectorXd d_0;
};
ReferenceModelInput reference_model_input(const LiftedModel& model,
                                          const Eigen::VectorXd& y_star,
                                          const Eigen::VectorXd& x0);

/// The desired output used directly as the reference input.
inline Eigen::VectorXd naive_initial_input(const Eigen::VectorXd& y_star) { return y_star; }

/// Interleaves a 3xN (axis-major) trace into the lifted axis-interleaved layout.
Eigen::VectorXd interleave(const Eigen::MatrixXd& axis_major);
/// Inverse of interleave for n_axes rows.
Eigen::MatrixXd deinterleave(const Eigen::VectorXd& lifted, int n_axes);

}  // namespace l1ilc
