#pragma once

#include <Eigen/Dense>

#include <vector>

namespace l1ilc {

/// Per-axis parameters of the adaptive output-feedback loop.
struct L1AxisConfig {
    double m = 1.1;            // reference-model pole [1/s]
    double omega = 3.5;        // low-pass cutoff [1/s]
    double K = 0.4;            // outer proportional gain
    double Gamma = 5000.0;     // adaptation rate [1/s]
    double sigma_bound = 10.0; // projection bound on the disturbance estimate
    double dt = 1e-3;          // controller period [s]
    double P = 0.0;            // Lyapunov weight; 0 selects the default 0.5/m

    double lyapunov_weight() const { return P > 0.0 ? P : 0.5 / m; }
    void validate() const;
    /// True when the discrete adaptation loop gain Gamma*m*P*dt reaches the
    /// warning ceiling of 2.
    bool adaptation_rate_warning() const;
};

/// Per-axis runtime state. sigma_hat stays inside [-sigma_bound, sigma_bound]
/// under the boundary-clamped projection; predictor and estimate start at zero.
struct L1AxisState {
    double sigma_hat = 0.0;
    double y1_hat = 0.0;
    double filter_state = 0.0;
    double last_u = 0.0;
};

/// r1 = K (r2 - y2).
double outer_loop(const L1AxisConfig& cfg, double r2, double y2);

/// Forward-Euler step of y1_hat' = -m y1_hat + m (u + sigma_hat).
void predictor_step(L1AxisState& state, const L1AxisConfig& cfg, double u, double dt);

/// Projected Euler step of sigma_hat' = Gamma Proj(sigma_hat, -m P ytilde),
/// with ytilde = y1_hat - y1_measured.
void adaptation_step(L1AxisState& state, const L1AxisConfig& cfg, double y1_measured, double dt);

/// One exact zero-order-hold step of the low-pass filter omega/(s+omega)
/// applied to (r1 - sigma_hat); returns the control value.
double control_step(L1AxisState& state, const L1AxisConfig& cfg, double r1, double dt);

/// Diagonal multi-axis composition of the per-axis loops.
class L1MimoController {
public:
    explicit L1MimoController(std::vector<L1AxisConfig> axes);

    int axis_count() const { return static_cast<int>(cfg_.size()); }
    const L1AxisConfig& config(int axis) const { return cfg_[static_cast<size_t>(axis)]; }
    const L1AxisState& state(int axis) const { return state_[static_cast<size_t>(axis)]; }
    bool adaptation_rate_warning() const { return rate_warning_; }

    void reset();

    /// Per axis: outer loop, control filter, predictor, adaptation; returns u.
    Eigen::VectorXd step(const Eigen::VectorXd& r2, const Eigen::VectorXd& y1,
                         const Eigen::VectorXd& y2);

private:
    std::vector<L1AxisConfig> cfg_;
    std::vector<L1AxisState> state_;
    bool rate_warning_ = false;
};

}  // namespace l1ilc
