#include "l1ilc/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace l1ilc {

void PlantConfig::validate() const {
    for (const auto& tf : axis_tf) {
        if (!tf.is_strictly_proper() || tf.is_zero()) {
            throw std::invalid_argument("PlantConfig: axis dynamics must be strictly proper");
        }
    }
    if (noise_std < 0.0) {
        throw std::invalid_argument("PlantConfig: noise_std must be >= 0");
    }
    if (sim_dt <= 0.0) {
        throw std::invalid_argument("PlantConfig: sim_dt must be positive");
    }
}

void DisturbanceSpec::validate() const {
    if (lipschitz_L < 0.0 || lipschitz_L0 < 0.0) {
        throw std::invalid_argument("DisturbanceSpec: Lipschitz constants must be >= 0");
    }
    if (wind_axis >= 3) {
        throw std::invalid_argument("DisturbanceSpec: wind axis out of range");
    }
    if (wind_axis >= 0 && std::abs(wind_magnitude) > lipschitz_L0) {
        throw std::invalid_argument(
            "DisturbanceSpec: |wind| must stay within the offset bound L0");
    }
}

double DisturbanceSpec::value(int axis, double t, double y1) const {
    double d = lipschitz_L * std::tanh(y1);
    if (axis == wind_axis && t >= wind_start && t < wind_end) {
        d += wind_magnitude;
    }
    return d;
}

Plant::Plant(PlantConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.validate();
    for (int a = 0; a < 3; ++a) {
        ss_[static_cast<size_t>(a)] = to_state_space(cfg_.axis_tf[static_cast<size_t>(a)]);
    }
    reset(Eigen::Vector3d::Zero());
}

void Plant::reset(const Eigen::Vector3d& y2_init) {
    for (int a = 0; a < 3; ++a) {
        x_[static_cast<size_t>(a)] = ss_[static_cast<size_t>(a)].zero_state();
    }
    y2_ = y2_init;
    t_ = 0.0;
    rng_.seed(cfg_.seed);
}

PlantOutput Plant::step(const DisturbanceSpec& dist, const Eigen::Vector3d& u) {
    if (!u.allFinite()) {
        throw std::invalid_argument("Plant::step: non-finite control input");
    }
    const double dt = cfg_.sim_dt;
    PlantOutput out;

    for (int a = 0; a < 3; ++a) {
        const StateSpace& ss = ss_[static_cast<size_t>(a)];
        Eigen::VectorXd& x = x_[static_cast<size_t>(a)];

        // RK4 on the augmented state [x_p; y2] with the state-dependent
        // disturbance evaluated inside each stage.
        auto deriv = [&](const Eigen::VectorXd& xs, double ts) {
            const double y1 = (ss.C * xs)(0, 0);
            const double d = dist.value(a, ts, y1);
            Eigen::VectorXd dx = ss.A * xs + ss.B * (u(a) + d);
            return std::make_pair(std::move(dx), y1);  // y2' = y1
        };

        const auto [k1x, k1y] = deriv(x, t_);
        const auto [k2x, k2y] = deriv(x + 0.5 * dt * k1x, t_ + 0.5 * dt);
        const auto [k3x, k3y] = deriv(x + 0.5 * dt * k2x, t_ + 0.5 * dt);
        const auto [k4x, k4y] = deriv(x + dt * k3x, t_ + dt);
        x += (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
        y2_(a) += (dt / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);

        const double y1_new = (ss.C * x)(0, 0);
        if (!std::isfinite(y1_new) || !std::isfinite(y2_(a))) {
            throw std::runtime_error("Plant::step: state diverged on axis " + std::to_string(a));
        }
        out.y1_true(a) = y1_new;
        out.y2_true(a) = y2_(a);
        out.disturbance(a) = dist.value(a, t_ + dt, y1_new);
    }
    t_ += dt;

    out.y1_meas = out.y1_true;
    out.y2_meas = out.y2_true;
    if (cfg_.noise_std > 0.0) {
        for (int a = 0; a < 3; ++a) {
            out.y1_meas(a) += cfg_.noise_std * gauss_(rng_);
            out.y2_meas(a) += cfg_.noise_std * gauss_(rng_);
        }
    }
    return out;
}

std::pair<PlantConfig, PlantConfig> vehicle_presets() {
    PlantConfig slow;
    slow.name = "slow";
    for (auto& tf : slow.axis_tf) {
        tf = RationalTF({2.5}, {2.5, 3.5, 1.0});
    }
    PlantConfig fast;
    fast.name = "fast";
    for (auto& tf : fast.axis_tf) {
        tf = RationalTF({25.0}, {25.0, 11.0, 1.0});
    }
    return {slow, fast};
}

std::array<double, 3> preset_filter_cutoffs(const std::string& preset_name) {
    if (preset_name == "fast") {
        return {23.0, 23.0, 3.8};
    }
    return {3.5, 3.5, 3.5};
}

}  // namespace l1ilc
