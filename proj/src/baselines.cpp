#include "l1ilc/baselines.hpp"

#include <algorithm>
#include <stdexcept>

namespace l1ilc {

void PdConfig::validate() const {
    if (tau <= 0.0 || zeta <= 0.0) {
        throw std::invalid_argument("PdConfig: tau and zeta must be positive");
    }
}

double pd_step(const PdConfig& cfg, double r2, double r2_dot, double y1, double y2) {
    return cfg.gain_d() * (r2_dot - y1) + cfg.gain_p() * (r2 - y2);
}

PidConfig PidConfig::from_tau_zeta(double tau, double zeta, double u_max) {
    if (tau <= 0.0 || zeta <= 0.0 || u_max <= 0.0) {
        throw std::invalid_argument("PidConfig: tau, zeta, u_max must be positive");
    }
    PidConfig cfg;
    cfg.alpha = tau * (1.0 + 2.0 * zeta);
    cfg.beta = tau * tau * (1.0 + 2.0 * zeta);
    cfg.gamma = tau * tau * tau;
    cfg.integrator_limit = u_max / cfg.gamma;
    return cfg;
}

void PidConfig::validate() const {
    if (integrator_limit < 0.0) {
        throw std::invalid_argument("PidConfig: integrator_limit must be >= 0");
    }
}

double pid_step(const PidConfig& cfg, PidState& state, double r2, double r2_dot, double y1,
                double y2, double dt) {
    if (dt <= 0.0) {
        throw std::invalid_argument("pid_step: dt must be positive");
    }
    const double e = r2 - y2;
    state.integrator += e * dt;
    if (cfg.integrator_limit > 0.0) {
        state.integrator = std::clamp(state.integrator, -cfg.integrator_limit,
                                      cfg.integrator_limit);
    }
    return cfg.alpha * (r2_dot - y1) + cfg.beta * e + cfg.gamma * state.integrator;
}

}  // namespace l1ilc
