#include "l1ilc/harness.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "l1ilc/json_io.hpp"

namespace l1ilc {

namespace {

/// Central differences with one-sided ends, per axis, for the deviation part
/// of the reference input.
Eigen::MatrixXd central_difference(const Eigen::MatrixXd& r, double dt) {
    const long n = r.cols();
    Eigen::MatrixXd v(r.rows(), n);
    if (n == 1) {
        v.setZero();
        return v;
    }
    v.col(0) = (r.col(1) - r.col(0)) / dt;
    for (long k = 1; k + 1 < n; ++k) {
        v.col(k) = (r.col(k + 1) - r.col(k - 1)) / (2.0 * dt);
    }
    v.col(n - 1) = (r.col(n - 1) - r.col(n - 2)) / dt;
    return v;
}

unsigned long long mix_seed(unsigned long long seed, int repetition) {
    // splitmix64 step keeps per-repetition streams decorrelated.
    unsigned long long z = seed + 0x9e3779b97f4a7c15ull * static_cast<unsigned long long>(repetition + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace

ScenarioPlan make_plan(const ScenarioConfig& cfg) {
    cfg.validate();
    ScenarioPlan plan;
    plan.cfg = cfg;
    plan.model = cfg.nominal_model();
    plan.r_nominal = cfg.trajectory.nominal_input();
    plan.r_nominal_dot = cfg.trajectory.nominal_input_velocity();
    plan.y_star = cfg.trajectory.desired_output();
    plan.y_star_lifted = interleave(plan.y_star);
    plan.constraints = make_acceleration_constraints(
        cfg.trajectory.samples, cfg.trajectory.dt(), 3, cfg.ddr_low, cfg.ddr_hi,
        interleave(plan.r_nominal));
    plan.ilc = make_ilc_plan(plan.model.lifted, cfg.weights, plan.constraints);
    return plan;
}

LearningState initial_learning_state(const ScenarioPlan& plan) {
    const ScenarioConfig& cfg = plan.cfg;
    LearningState st = make_initial_state(plan.model.lifted, cfg.p0);

    switch (cfg.init_mode) {
        case InitMode::naive:
            // r2 = y*: zero deviation from the nominal input.
            break;
        case InitMode::reference_model: {
            const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(plan.model.Ad.rows());
            // The trajectory starts at rest at y*(0); the free response of the
            // deviation coordinates is therefore zero only if the model state
            // starts on the nominal trajectory. Position states hold y2(0).
            Eigen::VectorXd x_init = x0;
            if (cfg.controller == ControllerKind::l1) {
                for (int a = 0; a < 3; ++a) {
                    x_init(2 * a) = cfg.trajectory.start(a);  // y2 component
                }
            }
            const ReferenceModelInput init =
                reference_model_input(plan.model, plan.y_star_lifted, x_init);
            st.r_bar = init.r_2_1 - interleave(plan.r_nominal);
            // Model-consistent initial estimate in the deviation coordinates of
            // the filter: the model predicts zero output deviation for r_2_1,
            // so d_hat must cancel F r_bar exactly.
            st.d_hat = -(plan.model.lifted.F * st.r_bar);
            break;
        }
        case InitMode::transfer: {
            LearningState imported = import_learning(cfg.transfer_path);
            if (imported.model_id != plan.model.lifted.model_id && !cfg.allow_model_mismatch) {
                throw std::runtime_error(
                    "transfer import: model fingerprint mismatch\n  donor:    " +
                    imported.model_id + "\n  scenario: " + plan.model.lifted.model_id +
                    "\nset allow_model_mismatch (or --force) to import anyway");
            }
            if (imported.r_bar.size() != plan.model.lifted.input_dim() ||
                imported.d_hat.size() != plan.model.lifted.output_dim()) {
                throw std::runtime_error("transfer import: lifted dimensions differ");
            }
            imported.model_id = plan.model.lifted.model_id;
            st = std::move(imported);
            break;
        }
    }
    return st;
}

RolloutResult rollout(const ScenarioPlan& plan, const Eigen::VectorXd& r_bar,
                      const DisturbanceSpec& dist, unsigned long long plant_seed,
                      const TraceSink& trace) {
    const ScenarioConfig& cfg = plan.cfg;
    const int N = cfg.trajectory.samples;
    const double dt_traj = cfg.trajectory.dt();
    const double dt_ctrl = cfg.controller_dt;
    const int ctrl_per_sample = static_cast<int>(std::round(dt_traj / dt_ctrl));

    PlantConfig pc = cfg.plant_config();
    pc.seed = plant_seed;
    // Plant substeps per controller period; at least 5 for the integrator to
    // stay well inside the controller bandwidth.
    const int substeps = std::max(1, static_cast<int>(std::round(dt_ctrl / pc.sim_dt)));
    Plant plant(pc);
    plant.reset(cfg.trajectory.start);

    // Total reference input and its derivative for the baseline laws.
    const Eigen::MatrixXd r_dev = deinterleave(r_bar, 3);
    const Eigen::MatrixXd r_total = plan.r_nominal + r_dev;
    const Eigen::MatrixXd r_dot_total = plan.r_nominal_dot + central_difference(r_dev, dt_traj);

    L1MimoController l1(cfg.l1_axes());
    const PdConfig pd = cfg.pd_config();
    const PidConfig pid = cfg.pid_config();
    std::array<PidState, 3> pid_state{};

    RolloutResult out;
    out.y2_sampled.resize(3, N);

    Eigen::Vector3d y1_meas = Eigen::Vector3d::Zero();
    Eigen::Vector3d y2_meas = cfg.trajectory.start;
    Eigen::Vector3d d_true = Eigen::Vector3d::Zero();
    std::pair<Eigen::Vector3d, Eigen::Vector3d> last_true{y1_meas, y2_meas};

    for (int s = 0; s < N; ++s) {
        const Eigen::Vector3d r2 = r_total.col(s);
        const Eigen::Vector3d r2_dot = r_dot_total.col(s);
        for (int c = 0; c < ctrl_per_sample; ++c) {
            Eigen::Vector3d u;
            Eigen::Vector3d r1 = Eigen::Vector3d::Zero();
            switch (cfg.controller) {
                case ControllerKind::l1:
                    for (int a = 0; a < 3; ++a) {
                        r1(a) = outer_loop(l1.config(a), r2(a), y2_meas(a));
                    }
                    u = l1.step(r2, y1_meas, y2_meas);
                    break;
                case ControllerKind::pd:
                    for (int a = 0; a < 3; ++a) {
                        u(a) = pd_step(pd, r2(a), r2_dot(a), y1_meas(a), y2_meas(a));
                    }
                    break;
                case ControllerKind::pid:
                    for (int a = 0; a < 3; ++a) {
                        u(a) = pid_step(pid, pid_state[static_cast<size_t>(a)], r2(a),
                                        r2_dot(a), y1_meas(a), y2_meas(a), dt_ctrl);
                    }
                    break;
            }

            PlantOutput po;
            for (int i = 0; i < substeps; ++i) {
                po = plant.step(dist, u);
            }
            y1_meas = po.y1_meas;
            y2_meas = po.y2_meas;
            d_true = po.disturbance;
            if (trace) {
                last_true = {po.y1_true, po.y2_true};
            }

            if (cfg.controller == ControllerKind::l1) {
                for (int a = 0; a < 3; ++a) {
                    out.sup_ytilde = std::max(
                        out.sup_ytilde, std::abs(l1.state(a).y1_hat - y1_meas(a)));
                }
            }
            if (trace) {
                TraceSample ts;
                ts.t = plant.time();
                ts.r2 = r2;
                ts.r2_dot = r2_dot;
                ts.y1_meas = y1_meas;
                ts.y2_meas = y2_meas;
                ts.y1_true = last_true.first;
                ts.y2_true = last_true.second;
                ts.u = u;
                ts.r1 = r1;
                ts.d_true = d_true;
                for (int a = 0; a < 3; ++a) {
                    if (cfg.controller == ControllerKind::l1) {
                        ts.sigma_hat(a) = l1.state(a).sigma_hat;
                        ts.y1_hat(a) = l1.state(a).y1_hat;
                    } else {
                        ts.sigma_hat(a) = 0.0;
                        ts.y1_hat(a) = 0.0;
                    }
                }
                trace(ts);
            }
        }
        out.y2_sampled.col(s) = y2_meas;
    }

    out.error = tracking_error(plan.y_star, out.y2_sampled);
    return out;
}

IterationRecord run_iteration(const ScenarioPlan& plan, LearningState& learning,
                              int repetition, const TraceSink& trace) {
    const auto t0 = std::chrono::steady_clock::now();
    const ScenarioConfig& cfg = plan.cfg;
    const int iter = learning.iteration + 1;

    const DisturbanceSpec dist = cfg.disturbance_for(iter, repetition);
    const unsigned long long plant_seed =
        mix_seed(cfg.seed, repetition * 100000 + iter);

    const RolloutResult ro = rollout(plan, learning.r_bar, dist, plant_seed, trace);

    const Eigen::VectorXd y_dev = interleave(ro.y2_sampled) - plan.y_star_lifted;
    kalman_update(learning, plan.model.lifted, cfg.weights, y_dev);
    ilc_update(learning, plan.model.lifted, plan.ilc);

    IterationRecord rec;
    rec.iteration = iter;
    rec.error = ro.error;
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return rec;
}

ScenarioResult run_scenario(const ScenarioConfig& cfg) { return run_scenario(make_plan(cfg)); }

ScenarioResult run_scenario(const ScenarioPlan& plan, const TraceFactory& traces) {
    const ScenarioConfig& cfg = plan.cfg;
    ScenarioResult result;
    result.repetitions.assign(static_cast<size_t>(cfg.repetitions), {});
    std::vector<LearningState> finals(static_cast<size_t>(cfg.repetitions));

    std::exception_ptr failure;
#pragma omp parallel for schedule(dynamic, 1) if (cfg.repetitions > 1)
    for (int rep = 0; rep < cfg.repetitions; ++rep) {
        try {
            LearningState learning = initial_learning_state(plan);
            std::vector<IterationRecord>& records =
                result.repetitions[static_cast<size_t>(rep)];
            records.reserve(static_cast<size_t>(cfg.iterations));
            for (int j = 0; j < cfg.iterations; ++j) {
                const TraceSink sink = traces ? traces(rep, learning.iteration + 1) : TraceSink();
                records.push_back(run_iteration(plan, learning, rep, sink));
            }
            finals[static_cast<size_t>(rep)] = std::move(learning);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    result.mean_error.assign(static_cast<size_t>(cfg.iterations), 0.0);
    result.std_error.assign(static_cast<size_t>(cfg.iterations), 0.0);
    for (int j = 0; j < cfg.iterations; ++j) {
        double mean = 0.0;
        double lo = 1e300, hi = -1e300;
        for (const auto& rep : result.repetitions) {
            const double e = rep[static_cast<size_t>(j)].error;
            mean += e;
            lo = std::min(lo, e);
            hi = std::max(hi, e);
        }
        mean /= cfg.repetitions;
        double var = 0.0;
        for (const auto& rep : result.repetitions) {
            const double d = rep[static_cast<size_t>(j)].error - mean;
            var += d * d;
        }
        result.mean_error[static_cast<size_t>(j)] = mean;
        // Identical repetitions (deterministic scenarios) report exactly zero
        // spread instead of rounding residue from the mean subtraction.
        result.std_error[static_cast<size_t>(j)] =
            (cfg.repetitions > 1 && hi > lo) ? std::sqrt(var / (cfg.repetitions - 1)) : 0.0;
    }
    result.final_state = std::move(finals.front());
    return result;
}

void export_learning(const LearningState& state, const std::string& path) {
    write_file(path, learning_state_to_json(state));
}

LearningState import_learning(const std::string& path) {
    return learning_state_from_json(read_file(path));
}

std::string summary_to_json(const RunSummary& s) {
    nlohmann::json j;
    j["name"] = s.name;
    j["framework"] = s.framework;
    j["init_mode"] = s.init_mode;
    j["plant"] = s.plant;
    j["mean_error"] = s.mean_error;
    j["std_error"] = s.std_error;
    if (s.donor_converged_error) {
        j["donor_converged_error"] = *s.donor_converged_error;
    }
    return j.dump(2);
}

RunSummary summary_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    RunSummary s;
    s.name = j.at("name").get<std::string>();
    s.framework = j.at("framework").get<std::string>();
    s.init_mode = j.at("init_mode").get<std::string>();
    s.plant = j.at("plant").get<std::string>();
    s.mean_error = j.at("mean_error").get<std::vector<double>>();
    s.std_error = j.at("std_error").get<std::vector<double>>();
    if (j.contains("donor_converged_error")) {
        s.donor_converged_error = j["donor_converged_error"].get<double>();
    }
    return s;
}

RunSummary make_summary(const ScenarioConfig& cfg, const ScenarioResult& result) {
    RunSummary s;
    s.name = cfg.name;
    s.framework = to_string(cfg.controller);
    s.init_mode = to_string(cfg.init_mode);
    s.plant = cfg.plant;
    s.mean_error = result.mean_error;
    s.std_error = result.std_error;
    return s;
}

namespace {

double mean_8_10(const std::vector<double>& e) {
    // Mean of iterations 8..10 (1-based); for shorter runs, the last third.
    if (e.size() >= 10) {
        return (e[7] + e[8] + e[9]) / 3.0;
    }
    const size_t lo = e.size() - std::max<size_t>(1, e.size() / 3);
    double acc = 0.0;
    for (size_t i = lo; i < e.size(); ++i) acc += e[i];
    return acc / static_cast<double>(e.size() - lo);
}

}  // namespace

CompareReport compare_report(const std::vector<RunSummary>& runs) {
    if (runs.empty()) {
        throw std::invalid_argument("compare_report: no runs given");
    }
    CompareReport rep;
    for (const auto& r : runs) {
        if (r.mean_error.empty()) {
            throw std::invalid_argument("compare_report: run '" + r.name + "' has no iterations");
        }
        CompareReport::Row row;
        row.framework = r.framework;
        row.init_mode = r.init_mode;
        row.e1 = r.mean_error.front();
        row.e8_10 = mean_8_10(r.mean_error);
        if (r.donor_converged_error && *r.donor_converged_error > 0.0) {
            row.transfer_factor = row.e1 / *r.donor_converged_error;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string CompareReport::to_text() const {
    std::ostringstream os;
    os << std::left << std::setw(12) << "framework" << std::setw(18) << "init_mode"
       << std::right << std::setw(12) << "e_1 [m]" << std::setw(14) << "e_8-10 [m]"
       << std::setw(16) << "xfer factor" << "\n";
    for (const auto& r : rows) {
        os << std::left << std::setw(12) << r.framework << std::setw(18) << r.init_mode
           << std::right << std::fixed << std::setprecision(4) << std::setw(12) << r.e1
           << std::setw(14) << r.e8_10;
        if (r.transfer_factor) {
            os << std::setw(16) << std::setprecision(3) << *r.transfer_factor;
        } else {
            os << std::setw(16) << "-";
        }
        os << "\n";
        os.unsetf(std::ios::fixed);
    }
    return os.str();
}

std::string CompareReport::to_csv() const {
    std::ostringstream os;
    os << "framework,init_mode,e1,e8_10,transfer_factor\n";
    for (const auto& r : rows) {
        os << r.framework << ',' << r.init_mode << ',' << r.e1 << ',' << r.e8_10 << ',';
        if (r.transfer_factor) os << *r.transfer_factor;
        os << "\n";
    }
    return os.str();
}

}  // namespace l1ilc
