#pragma once

#include <Eigen/Dense>

#include <array>
#include <random>
#include <string>

#include "l1ilc/state_space.hpp"
#include "l1ilc/transfer_function.hpp"

namespace l1ilc {

/// Decoupled per-axis velocity plant y1 = A(s)(u + d) with y2 the exact
/// integral of y1. The axis dynamics are continuous-time rational transfer
/// functions integrated at sim_dt under zero-order-hold inputs.
struct PlantConfig {
    std::array<RationalTF, 3> axis_tf;
    double noise_std = 0.0;   // measurement noise on y1 and y2 [m/s], [m]
    double sim_dt = 1e-4;     // integration step [s]
    unsigned long long seed = 0;
    std::string name = "custom";

    void validate() const;
};

/// State-dependent Lipschitz disturbance plus an axis-aligned wind step:
/// d_axis(t, y1) = L tanh(y1) + wind(t) on the wind axis.
struct DisturbanceSpec {
    double lipschitz_L = 0.5;   // slope bound of the state-dependent part
    double lipschitz_L0 = 0.6;  // offset bound; must dominate |wind|
    int wind_axis = -1;         // -1 disables wind
    double wind_magnitude = 0.0;
    double wind_start = 0.0;
    double wind_end = 0.0;

    void validate() const;
    double value(int axis, double t, double y1) const;
};

struct PlantOutput {
    Eigen::Vector3d y1_meas;
    Eigen::Vector3d y2_meas;
    Eigen::Vector3d y1_true;
    Eigen::Vector3d y2_true;
    Eigen::Vector3d disturbance;
};

class Plant {
public:
    explicit Plant(PlantConfig cfg);

    /// Resets to rest at position y2_init and reseeds the noise stream.
    void reset(const Eigen::Vector3d& y2_init);

    /// Advances one integration step of length cfg.sim_dt under the held
    /// control u and returns the (noisy) measurements at the new time.
    PlantOutput step(const DisturbanceSpec& dist, const Eigen::Vector3d& u);

    double time() const { return t_; }
    const PlantConfig& config() const { return cfg_; }

private:
    PlantConfig cfg_;
    std::array<StateSpace, 3> ss_;
    std::array<Eigen::VectorXd, 3> x_;  // per-axis plant state
    Eigen::Vector3d y2_;
    double t_ = 0.0;
    std::mt19937_64 rng_;
    std::normal_distribution<double> gauss_{0.0, 1.0};
};

/// Two fixed parameter sets with clearly different bandwidth; both satisfy the
/// small-gain design conditions with the default controller parameters.
std::pair<PlantConfig, PlantConfig> vehicle_presets();

/// Default per-axis low-pass cutoffs paired with a preset (wideband loops for
/// the fast vehicle, narrow for the slow one).
std::array<double, 3> preset_filter_cutoffs(const std::string& preset_name);

}  // namespace l1ilc
