#pragma once

namespace l1ilc {

/// Second-order PD position law: u = (2 zeta / tau)(r2dot - y1) + (r2 - y2)/tau^2.
struct PdConfig {
    double tau = 0.8;
    double zeta = 0.7;

    void validate() const;
    double gain_d() const { return 2.0 * zeta / tau; }
    double gain_p() const { return 1.0 / (tau * tau); }
};

double pd_step(const PdConfig& cfg, double r2, double r2_dot, double y1, double y2);

/// PID position law with a clamped error integrator.
struct PidConfig {
    double alpha = 0.0;
    double beta = 0.0;
    double gamma = 0.0;
    double integrator_limit = 0.0;  // bound on the accumulated error

    /// Gains from the time constant and damping parameterization:
    /// alpha = tau(1+2 zeta), beta = tau^2(1+2 zeta), gamma = tau^3.
    /// The anti-windup limit defaults to u_max / gamma.
    static PidConfig from_tau_zeta(double tau, double zeta, double u_max = 10.0);

    void validate() const;
};

struct PidState {
    double integrator = 0.0;  // accumulated position error [m s]
};

double pid_step(const PidConfig& cfg, PidState& state, double r2, double r2_dot, double y1,
                double y2, double dt);

}  // namespace l1ilc
