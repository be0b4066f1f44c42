#include "l1ilc/json_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace l1ilc {

namespace {

using nlohmann::json;

json tf_to_json_obj(const RationalTF& tf) {
    return json{{"num", tf.num.coeffs()}, {"den", tf.den.coeffs()}};
}

RationalTF tf_from_json_obj(const json& j) {
    return RationalTF(j.at("num").get<std::vector<double>>(),
                      j.at("den").get<std::vector<double>>());
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

Eigen::VectorXd to_eigen(const std::vector<double>& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<long>(v.size()));
}

}  // namespace

std::string tf_to_json(const RationalTF& tf) { return tf_to_json_obj(tf).dump(); }

RationalTF tf_from_json(const std::string& text) {
    return tf_from_json_obj(json::parse(text));
}

std::string plant_to_json(const PlantConfig& cfg) {
    json j;
    j["name"] = cfg.name;
    j["noise_std"] = cfg.noise_std;
    j["sim_dt"] = cfg.sim_dt;
    j["axes"] = json::array();
    for (const auto& tf : cfg.axis_tf) {
        j["axes"].push_back(tf_to_json_obj(tf));
    }
    return j.dump(2);
}

PlantConfig plant_from_json(const std::string& text) {
    const json j = json::parse(text);
    PlantConfig cfg;
    cfg.name = j.value("name", "custom");
    cfg.noise_std = j.value("noise_std", 0.0);
    cfg.sim_dt = j.value("sim_dt", 1e-4);
    const auto& axes = j.at("axes");
    if (axes.size() != 3) {
        throw std::invalid_argument("plant_from_json: exactly three axes required");
    }
    for (size_t a = 0; a < 3; ++a) {
        cfg.axis_tf[a] = tf_from_json_obj(axes[a]);
    }
    cfg.validate();
    return cfg;
}

std::string learning_state_to_json(const LearningState& state) {
    json j;
    j["iteration"] = state.iteration;
    j["r_bar"] = to_std(state.r_bar);
    j["d_hat"] = to_std(state.d_hat);
    j["p_cov"] = to_std(state.p_cov);
    j["model_id"] = state.model_id;
    return j.dump();
}

LearningState learning_state_from_json(const std::string& text) {
    const json j = json::parse(text);
    LearningState st;
    st.iteration = j.at("iteration").get<int>();
    st.r_bar = to_eigen(j.at("r_bar").get<std::vector<double>>());
    st.d_hat = to_eigen(j.at("d_hat").get<std::vector<double>>());
    st.p_cov = to_eigen(j.at("p_cov").get<std::vector<double>>());
    st.model_id = j.at("model_id").get<std::string>();
    if (st.p_cov.size() != st.d_hat.size()) {
        throw std::invalid_argument("learning_state_from_json: p_cov/d_hat length mismatch");
    }
    for (long i = 0; i < st.p_cov.size(); ++i) {
        if (st.p_cov(i) < 0.0) {
            throw std::invalid_argument("learning_state_from_json: negative covariance entry");
        }
    }
    return st;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("write_file: cannot open " + path);
    }
    out << content;
    if (!out) {
        throw std::runtime_error("write_file: write failed for " + path);
    }
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("read_file: cannot open " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace l1ilc
