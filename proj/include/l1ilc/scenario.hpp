#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>

#include "l1ilc/baselines.hpp"
#include "l1ilc/l1_controller.hpp"
#include "l1ilc/learning.hpp"
#include "l1ilc/lifted.hpp"
#include "l1ilc/plant.hpp"

namespace l1ilc {

/// Point-to-point position trajectory with quintic smoothstep timing: zero
/// velocity and acceleration at both ends, which keeps the acceleration
/// bounds feasible by construction.
struct TrajectorySpec {
    Eigen::Vector3d start{0.0, 0.0, 1.0};
    Eigen::Vector3d end{1.0, 1.0, 2.0};
    double duration = 8.0;
    int samples = 400;

    double dt() const { return duration / samples; }
    Eigen::Vector3d position(double t) const;
    Eigen::Vector3d velocity(double t) const;
    double peak_speed() const;

    /// Input samples r(l) = position(l dt), l = 0..N-1 (3xN, axis major).
    Eigen::MatrixXd nominal_input() const;
    /// Analytic input derivative samples at l dt.
    Eigen::MatrixXd nominal_input_velocity() const;
    /// Output samples y*(k) = position(k dt), k = 1..N (3xN).
    Eigen::MatrixXd desired_output() const;
};

enum class ControllerKind { l1, pd, pid };
enum class InitMode { naive, reference_model, transfer };

std::string to_string(ControllerKind c);
std::string to_string(InitMode m);

/// Full experiment description, loadable from a declarative key=value file.
struct ScenarioConfig {
    std::string name = "scenario";

    // Plant selection: preset id ("slow"/"fast") or path to a plant JSON file.
    std::string plant = "slow";
    double plant_perturb = 0.0;  // fractional denominator perturbation
    double noise_std = 0.0;
    ControllerKind controller = ControllerKind::l1;

    TrajectorySpec trajectory;

    // Adaptive-controller parameters (per axis where vectors).
    double gamma = 5000.0;
    Eigen::Vector3d m{1.1, 1.1, 1.75};
    Eigen::Vector3d k{0.4, 0.4, 0.4};
    Eigen::Vector3d omega{0.0, 0.0, 0.0};  // 0: preset default cutoffs
    double sigma_bound = 0.0;              // 0: sized from the disturbance spec
    double controller_dt = 1e-3;
    double lyapunov_p = 0.0;               // 0: default 0.5/m

    // Baseline gains.
    double pd_tau = 0.8;
    double pd_zeta = 0.7;
    double u_max = 10.0;

    // Learning parameters.
    IlcWeights weights;
    double p0 = 1.0;
    double ddr_low = -2.0;
    double ddr_hi = 2.0;

    // Disturbance schedule.
    double lipschitz_L = 0.5;
    double lipschitz_L0 = 0.6;
    int wind_axis = -1;
    double wind_magnitude = 0.0;
    double wind_start = 0.0;
    double wind_end = 0.0;
    int wind_from_iteration = 1;
    double wind_iter_noise = 0.0;

    int iterations = 10;
    int repetitions = 1;
    unsigned long long seed = 1;
    InitMode init_mode = InitMode::naive;
    std::string transfer_path;
    bool allow_model_mismatch = false;

    bool trace = false;
    std::string out_dir;

    void validate() const;

    // Derived builders.
    PlantConfig plant_config() const;
    std::vector<L1AxisConfig> l1_axes() const;
    PdConfig pd_config() const;
    PidConfig pid_config() const;
    LiftedModel nominal_model() const;
    double effective_sigma_bound() const;
    /// Wind realization for one iteration; per-iteration magnitude noise is
    /// drawn deterministically from (seed, repetition, iteration).
    DisturbanceSpec disturbance_for(int iteration, int repetition) const;
};

/// Parses the documented key=value format. Unknown keys are an error.
/// Environment overrides: L1ILC_SEED and L1ILC_OUT_DIR.
ScenarioConfig load_scenario(const std::string& path);
ScenarioConfig parse_scenario(const std::string& text, const std::string& name);

}  // namespace l1ilc
