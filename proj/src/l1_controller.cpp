#include "l1ilc/l1_controller.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace l1ilc {

void L1AxisConfig::validate() const {
    if (m <= 0.0 || omega <= 0.0 || K <= 0.0 || Gamma <= 0.0 || sigma_bound <= 0.0 ||
        dt <= 0.0 || P < 0.0) {
        throw std::invalid_argument("L1AxisConfig: parameters must be strictly positive");
    }
}

bool L1AxisConfig::adaptation_rate_warning() const {
    return Gamma * m * lyapunov_weight() * dt >= 2.0;
}

double outer_loop(const L1AxisConfig& cfg, double r2, double y2) {
    return cfg.K * (r2 - y2);
}

void predictor_step(L1AxisState& state, const L1AxisConfig& cfg, double u, double dt) {
    state.y1_hat += dt * (-cfg.m * state.y1_hat + cfg.m * (u + state.sigma_hat));
}

void adaptation_step(L1AxisState& state, const L1AxisConfig& cfg, double y1_measured, double dt) {
    const double y_tilde = state.y1_hat - y1_measured;
    double rate = -cfg.m * cfg.lyapunov_weight() * y_tilde;
    // Boundary-clamped projection: drop the outward component at the bound.
    if ((state.sigma_hat >= cfg.sigma_bound && rate > 0.0) ||
        (state.sigma_hat <= -cfg.sigma_bound && rate < 0.0)) {
        rate = 0.0;
    }
    state.sigma_hat += cfg.Gamma * rate * dt;
    state.sigma_hat = std::clamp(state.sigma_hat, -cfg.sigma_bound, cfg.sigma_bound);
}

double control_step(L1AxisState& state, const L1AxisConfig& cfg, double r1, double dt) {
    const double a = std::exp(-cfg.omega * dt);
    state.filter_state = a * state.filter_state + (1.0 - a) * (r1 - state.sigma_hat);
    state.last_u = state.filter_state;
    return state.last_u;
}

L1MimoController::L1MimoController(std::vector<L1AxisConfig> axes) : cfg_(std::move(axes)) {
    if (cfg_.empty()) {
        throw std::invalid_argument("L1MimoController: at least one axis required");
    }
    for (const auto& c : cfg_) {
        c.validate();
        rate_warning_ = rate_warning_ || c.adaptation_rate_warning();
    }
    state_.resize(cfg_.size());
}

void L1MimoController::reset() {
    for (auto& s : state_) {
        s = L1AxisState{};
    }
}

Eigen::VectorXd L1MimoController::step(const Eigen::VectorXd& r2, const Eigen::VectorXd& y1,
                                       const Eigen::VectorXd& y2) {
    const int n = axis_count();
    if (r2.size() != n || y1.size() != n || y2.size() != n) {
        throw std::invalid_argument("L1MimoController::step: dimension mismatch");
    }
    Eigen::VectorXd u(n);
    for (int a = 0; a < n; ++a) {
        const L1AxisConfig& cfg = cfg_[static_cast<size_t>(a)];
        L1AxisState& st = state_[static_cast<size_t>(a)];
        const double r1 = outer_loop(cfg, r2(a), y2(a));
        u(a) = control_step(st, cfg, r1, cfg.dt);
        predictor_step(st, cfg, u(a), cfg.dt);
        adaptation_step(st, cfg, y1(a), cfg.dt);
    }
    return u;
}

}  // namespace l1ilc
