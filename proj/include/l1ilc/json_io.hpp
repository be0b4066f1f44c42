#pragma once

#include <string>

#include "l1ilc/learning.hpp"
#include "l1ilc/plant.hpp"
#include "l1ilc/transfer_function.hpp"

namespace l1ilc {

/// {"num":[...],"den":[...]} with ascending-power coefficient arrays.
std::string tf_to_json(const RationalTF& tf);
RationalTF tf_from_json(const std::string& text);

/// Plant description: {"axes":[{tf},{tf},{tf}],"noise_std":..,"sim_dt":..,"name":..}.
std::string plant_to_json(const PlantConfig& cfg);
PlantConfig plant_from_json(const std::string& text);

/// The transfer artifact:
/// {"iteration": j, "r_bar": [...], "d_hat": [...], "p_cov": [...], "model_id": "..."}.
std::string learning_state_to_json(const LearningState& state);
LearningState learning_state_from_json(const std::string& text);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace l1ilc
