#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "l1ilc/learning.hpp"
#include "l1ilc/scenario.hpp"

namespace l1ilc {

struct IterationRecord {
    int iteration = 0;
    double error = 0.0;  // mean pointwise 3-D position error [m]
    double wall_ms = 0.0;
};

/// Immutable per-scenario machinery shared by every repetition: nominal model,
/// lifted map, constraints and the prefactored update program.
struct ScenarioPlan {
    ScenarioConfig cfg;
    LiftedModel model;
    Constraints constraints;
    IlcPlan ilc;
    Eigen::MatrixXd r_nominal;       // 3xN
    Eigen::MatrixXd r_nominal_dot;   // 3xN, analytic
    Eigen::MatrixXd y_star;          // 3xN desired output
    Eigen::VectorXd y_star_lifted;   // interleaved
};

ScenarioPlan make_plan(const ScenarioConfig& cfg);

/// Initial learning state for the configured init mode. For transfer init the
/// imported state's fingerprint must match the plan's model (unless the
/// scenario explicitly allows a mismatch).
LearningState initial_learning_state(const ScenarioPlan& plan);

/// Rollout telemetry sink: called once per controller period when tracing.
struct TraceSample {
    double t = 0.0;
    Eigen::Vector3d r2, r2_dot, y1_meas, y2_meas, y1_true, y2_true, u, r1, sigma_hat, y1_hat,
        d_true;
};
using TraceSink = std::function<void(const TraceSample&)>;

struct RolloutResult {
    Eigen::MatrixXd y2_sampled;  // 3xN measured output at the trajectory samples
    double error = 0.0;
    double sup_ytilde = 0.0;     // sup over time and axes of |y1_hat - y1_meas|
};

/// Simulates one full trajectory with the given input deviation. The plant and
/// controller are reset to the trajectory start; trials begin at rest.
RolloutResult rollout(const ScenarioPlan& plan, const Eigen::VectorXd& r_bar,
                      const DisturbanceSpec& dist, unsigned long long plant_seed,
                      const TraceSink& trace = nullptr);

/// One learning iteration: rollout, measurement update, input update.
IterationRecord run_iteration(const ScenarioPlan& plan, LearningState& learning,
                              int repetition, const TraceSink& trace = nullptr);

struct ScenarioResult {
    std::vector<double> mean_error;  // per iteration, across repetitions
    std::vector<double> std_error;
    std::vector<std::vector<IterationRecord>> repetitions;
    LearningState final_state;  // from the first repetition
};

/// Produces a per-iteration sink, or nullptr to skip tracing that iteration.
using TraceFactory = std::function<TraceSink(int repetition, int iteration)>;

/// Runs all repetitions (in parallel when OpenMP is available) and aggregates
/// mean and standard deviation of the error per iteration.
ScenarioResult run_scenario(const ScenarioConfig& cfg);
ScenarioResult run_scenario(const ScenarioPlan& plan, const TraceFactory& traces = nullptr);

void export_learning(const LearningState& state, const std::string& path);
LearningState import_learning(const std::string& path);

/// Run summary persisted next to scenario outputs so reports can be assembled
/// offline from a results directory.
struct RunSummary {
    std::string name;
    std::string framework;   // l1 | pd | pid
    std::string init_mode;
    std::string plant;
    std::vector<double> mean_error;
    std::vector<double> std_error;
    std::optional<double> donor_converged_error;  // set on transfer runs
};

std::string summary_to_json(const RunSummary& s);
RunSummary summary_from_json(const std::string& text);
RunSummary make_summary(const ScenarioConfig& cfg, const ScenarioResult& result);

/// Comparison matrix over init modes and frameworks: first-iteration error and
/// the mean of iterations 8-10, plus transfer factors where applicable.
struct CompareReport {
    struct Row {
        std::string framework;
        std::string init_mode;
        double e1 = 0.0;
        double e8_10 = 0.0;
        std::optional<double> transfer_factor;
    };
    std::vector<Row> rows;

    std::string to_text() const;
    std::string to_csv() const;
};

CompareReport compare_report(const std::vector<RunSummary>& runs);

}  // namespace l1ilc
