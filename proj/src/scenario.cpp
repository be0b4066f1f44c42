#include "l1ilc/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <stdexcept>

#include "l1ilc/json_io.hpp"

namespace l1ilc {

namespace {

double smoothstep(double p) { return p * p * p * (10.0 + p * (-15.0 + 6.0 * p)); }
double smoothstep_deriv(double p) { return p * p * (30.0 + p * (-60.0 + 30.0 * p)); }

}  // namespace

Eigen::Vector3d TrajectorySpec::position(double t) const {
    const double p = std::clamp(t / duration, 0.0, 1.0);
    return start + (end - start) * smoothstep(p);
}

Eigen::Vector3d TrajectorySpec::velocity(double t) const {
    const double p = t / duration;
    if (p < 0.0 || p > 1.0) {
        return Eigen::Vector3d::Zero();
    }
    return (end - start) * (smoothstep_deriv(p) / duration);
}

double TrajectorySpec::peak_speed() const {
    // Quintic smoothstep attains its peak slope 15/8 at the midpoint.
    return (end - start).norm() * (15.0 / 8.0) / duration;
}

Eigen::MatrixXd TrajectorySpec::nominal_input() const {
    Eigen::MatrixXd r(3, samples);
    for (int l = 0; l < samples; ++l) {
        r.col(l) = position(l * dt());
    }
    return r;
}

Eigen::MatrixXd TrajectorySpec::nominal_input_velocity() const {
    Eigen::MatrixXd v(3, samples);
    for (int l = 0; l < samples; ++l) {
        v.col(l) = velocity(l * dt());
    }
    return v;
}

Eigen::MatrixXd TrajectorySpec::desired_output() const {
    Eigen::MatrixXd y(3, samples);
    for (int k = 1; k <= samples; ++k) {
        y.col(k - 1) = position(k * dt());
    }
    return y;
}

std::string to_string(ControllerKind c) {
    switch (c) {
        case ControllerKind::l1: return "l1";
        case ControllerKind::pd: return "pd";
        case ControllerKind::pid: return "pid";
    }
    return "?";
}

std::string to_string(InitMode m) {
    switch (m) {
        case InitMode::naive: return "naive";
        case InitMode::reference_model: return "reference_model";
        case InitMode::transfer: return "transfer";
    }
    return "?";
}

void ScenarioConfig::validate() const {
    if (trajectory.samples < 3) {
        throw std::invalid_argument("scenario: trajectory_samples must be >= 3");
    }
    if (trajectory.duration <= 0.0) {
        throw std::invalid_argument("scenario: trajectory_duration must be positive");
    }
    if (iterations < 1 || repetitions < 1) {
        throw std::invalid_argument("scenario: iterations and repetitions must be >= 1");
    }
    if (controller_dt <= 0.0) {
        throw std::invalid_argument("scenario: controller_dt must be positive");
    }
    const double ratio = trajectory.dt() / controller_dt;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 || ratio < 1.0) {
        throw std::invalid_argument(
            "scenario: trajectory sample period must be an integer multiple of controller_dt");
    }
    if (ddr_low >= ddr_hi) {
        throw std::invalid_argument("scenario: ddr_low must be below ddr_hi");
    }
    if (init_mode == InitMode::transfer && transfer_path.empty()) {
        throw std::invalid_argument("scenario: transfer init requires transfer_path");
    }
    if (wind_axis >= 0 && std::abs(wind_magnitude) + 3.0 * wind_iter_noise > lipschitz_L0) {
        throw std::invalid_argument(
            "scenario: wind magnitude (plus 3 sigma of its noise) must stay within lipschitz_L0");
    }
}

PlantConfig ScenarioConfig::plant_config() const {
    PlantConfig cfg;
    if (plant == "slow") {
        cfg = vehicle_presets().first;
    } else if (plant == "fast") {
        cfg = vehicle_presets().second;
    } else {
        cfg = plant_from_json(read_file(plant));
    }
    if (plant_perturb != 0.0) {
        for (auto& tf : cfg.axis_tf) {
            std::vector<double> den = tf.den.coeffs();
            for (size_t i = 0; i + 1 < den.size(); ++i) {
                den[i] *= 1.0 + plant_perturb;
            }
            tf = RationalTF(tf.num.coeffs(), den);
        }
        cfg.name += "+perturbed";
    }
    cfg.noise_std = noise_std;
    cfg.seed = seed;
    return cfg;
}

std::vector<L1AxisConfig> ScenarioConfig::l1_axes() const {
    const std::array<double, 3> cutoffs = preset_filter_cutoffs(plant);
    std::vector<L1AxisConfig> axes(3);
    for (int a = 0; a < 3; ++a) {
        L1AxisConfig& c = axes[static_cast<size_t>(a)];
        c.m = m(a);
        c.K = k(a);
        c.omega = omega(a) > 0.0 ? omega(a) : cutoffs[static_cast<size_t>(a)];
        c.Gamma = gamma;
        c.sigma_bound = effective_sigma_bound();
        c.dt = controller_dt;
        c.P = lyapunov_p;
        c.validate();
    }
    return axes;
}

PdConfig ScenarioConfig::pd_config() const {
    PdConfig cfg;
    cfg.tau = pd_tau;
    cfg.zeta = pd_zeta;
    cfg.validate();
    return cfg;
}

PidConfig ScenarioConfig::pid_config() const {
    return PidConfig::from_tau_zeta(pd_tau, pd_zeta, u_max);
}

LiftedModel ScenarioConfig::nominal_model() const {
    const int N = trajectory.samples;
    const double dt = trajectory.dt();
    if (controller == ControllerKind::l1) {
        return build_reference_model({m(0), m(1), m(2)}, {k(0), k(1), k(2)}, dt, N);
    }
    const PlantConfig pc = plant_config();
    const std::vector<RationalTF> axes(pc.axis_tf.begin(), pc.axis_tf.end());
    std::ostringstream id;
    if (controller == ControllerKind::pd) {
        const PdConfig c = pd_config();
        id << "pdloop;plant=" << pc.name << ";tau=" << pd_tau << ";zeta=" << pd_zeta
           << ";dt=" << dt << ";n=" << N;
        return build_baseline_model(axes, c.gain_d(), c.gain_p(), 0.0, dt, N, id.str());
    }
    const PidConfig c = pid_config();
    id << "pidloop;plant=" << pc.name << ";tau=" << pd_tau << ";zeta=" << pd_zeta
       << ";dt=" << dt << ";n=" << N;
    return build_baseline_model(axes, c.alpha, c.beta, c.gamma, dt, N, id.str());
}

double ScenarioConfig::effective_sigma_bound() const {
    if (sigma_bound > 0.0) {
        return sigma_bound;
    }
    // Ten times the largest disturbance the scenario can produce.
    const double d_max = lipschitz_L0 + lipschitz_L * std::max(1.0, trajectory.peak_speed());
    return 10.0 * d_max;
}

DisturbanceSpec ScenarioConfig::disturbance_for(int iteration, int repetition) const {
    DisturbanceSpec d;
    d.lipschitz_L = lipschitz_L;
    d.lipschitz_L0 = lipschitz_L0;
    if (wind_axis >= 0 && iteration >= wind_from_iteration) {
        d.wind_axis = wind_axis;
        d.wind_start = wind_start;
        d.wind_end = wind_end > 0.0 ? wind_end : trajectory.duration;
        double mag = wind_magnitude;
        if (wind_iter_noise > 0.0) {
            // Deterministic per-(rep, iteration) draw, independent of execution order.
            std::seed_seq seq{static_cast<unsigned long long>(seed), 0x9e3779b9ull,
                              static_cast<unsigned long long>(repetition),
                              static_cast<unsigned long long>(iteration)};
            std::mt19937_64 rng(seq);
            std::normal_distribution<double> gauss(0.0, wind_iter_noise);
            mag += gauss(rng);
        }
        d.wind_magnitude = mag;
    }
    d.validate();
    return d;
}

namespace {

int parse_axis(const std::string& v) {
    if (v == "x") return 0;
    if (v == "y") return 1;
    if (v == "z") return 2;
    if (v == "none") return -1;
    throw std::invalid_argument("scenario: bad axis '" + v + "' (x|y|z|none)");
}

Eigen::Vector3d parse_vec3(const std::string& v) {
    std::istringstream ss(v);
    Eigen::Vector3d out;
    if (!(ss >> out(0) >> out(1) >> out(2))) {
        throw std::invalid_argument("scenario: expected three numbers, got '" + v + "'");
    }
    return out;
}

bool parse_bool(const std::string& v) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw std::invalid_argument("scenario: bad boolean '" + v + "'");
}

}  // namespace

ScenarioConfig parse_scenario(const std::string& text, const std::string& name) {
    ScenarioConfig cfg;
    cfg.name = name;

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto notspace = [](unsigned char c) { return !std::isspace(c); };
        line.erase(line.begin(), std::find_if(line.begin(), line.end(), notspace));
        line.erase(std::find_if(line.rbegin(), line.rend(), notspace).base(), line.end());
        if (line.empty()) continue;

        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": expected key = value");
        }
        std::string key = line.substr(0, eq);
        std::string val = line.substr(eq + 1);
        key.erase(std::find_if(key.rbegin(), key.rend(), notspace).base(), key.end());
        val.erase(val.begin(), std::find_if(val.begin(), val.end(), notspace));

        auto num = [&] { return std::stod(val); };
        auto integer = [&] { return std::stoi(val); };

        if (key == "name") cfg.name = val;
        else if (key == "plant") cfg.plant = val;
        else if (key == "plant_perturb") cfg.plant_perturb = num();
        else if (key == "noise_std") cfg.noise_std = num();
        else if (key == "controller") {
            if (val == "l1") cfg.controller = ControllerKind::l1;
            else if (val == "pd") cfg.controller = ControllerKind::pd;
            else if (val == "pid") cfg.controller = ControllerKind::pid;
            else throw std::invalid_argument("scenario: unknown controller '" + val + "'");
        }
        else if (key == "trajectory_start") cfg.trajectory.start = parse_vec3(val);
        else if (key == "trajectory_end") cfg.trajectory.end = parse_vec3(val);
        else if (key == "trajectory_duration") cfg.trajectory.duration = num();
        else if (key == "trajectory_samples") cfg.trajectory.samples = integer();
        else if (key == "gamma") cfg.gamma = num();
        else if (key == "m") cfg.m = parse_vec3(val);
        else if (key == "k") cfg.k = parse_vec3(val);
        else if (key == "omega") cfg.omega = parse_vec3(val);
        else if (key == "sigma_bound") cfg.sigma_bound = num();
        else if (key == "controller_dt") cfg.controller_dt = num();
        else if (key == "lyapunov_p") cfg.lyapunov_p = num();
        else if (key == "pd_tau") cfg.pd_tau = num();
        else if (key == "pd_zeta") cfg.pd_zeta = num();
        else if (key == "u_max") cfg.u_max = num();
        else if (key == "q") cfg.weights.q = num();
        else if (key == "r_w") cfg.weights.r_w = num();
        else if (key == "s_w") cfg.weights.s_w = num();
        else if (key == "eta") cfg.weights.eta = num();
        else if (key == "eps") cfg.weights.eps = num();
        else if (key == "p0") cfg.p0 = num();
        else if (key == "ddr_low") cfg.ddr_low = num();
        else if (key == "ddr_hi") cfg.ddr_hi = num();
        else if (key == "lipschitz_L") cfg.lipschitz_L = num();
        else if (key == "lipschitz_L0") cfg.lipschitz_L0 = num();
        else if (key == "wind_axis") cfg.wind_axis = parse_axis(val);
        else if (key == "wind_magnitude") cfg.wind_magnitude = num();
        else if (key == "wind_start") cfg.wind_start = num();
        else if (key == "wind_end") cfg.wind_end = num();
        else if (key == "wind_from_iteration") cfg.wind_from_iteration = integer();
        else if (key == "wind_iter_noise") cfg.wind_iter_noise = num();
        else if (key == "iterations") cfg.iterations = integer();
        else if (key == "repetitions") cfg.repetitions = integer();
        else if (key == "seed") cfg.seed = std::stoull(val);
        else if (key == "init_mode") {
            if (val == "naive") cfg.init_mode = InitMode::naive;
            else if (val == "reference_model") cfg.init_mode = InitMode::reference_model;
            else if (val == "transfer") cfg.init_mode = InitMode::transfer;
            else throw std::invalid_argument("scenario: unknown init_mode '" + val + "'");
        }
        else if (key == "transfer_path") cfg.transfer_path = val;
        else if (key == "allow_model_mismatch") cfg.allow_model_mismatch = parse_bool(val);
        else if (key == "trace") cfg.trace = parse_bool(val);
        else if (key == "out_dir") cfg.out_dir = val;
        else {
            throw std::invalid_argument("scenario line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
        }
    }

    if (const char* env_seed = std::getenv("L1ILC_SEED")) {
        cfg.seed = std::stoull(env_seed);
    }
    if (const char* env_out = std::getenv("L1ILC_OUT_DIR")) {
        cfg.out_dir = env_out;
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_scenario(const std::string& path) {
    std::string name = path;
    const size_t slash = name.find_last_of('/');
    if (slash != std::string::npos) name.erase(0, slash + 1);
    const size_t dot = name.find_last_of('.');
    if (dot != std::string::npos) name.erase(dot);
    return parse_scenario(read_file(path), name);
}

}  // namespace l1ilc
