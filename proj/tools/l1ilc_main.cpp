// Command-line front end: scenario runs, learning-state transfer, design-
// condition checks and comparison reports.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <tuple>

#include <CLI11.hpp>

#include "l1ilc/harness.hpp"
#include "l1ilc/json_io.hpp"
#include "l1ilc/l1_norm.hpp"

namespace fs = std::filesystem;
using namespace l1ilc;

namespace {

std::string iterations_csv(const ScenarioResult& result) {
    std::ostringstream os;
    os << "iteration,mean_error,std_error\n";
    for (size_t j = 0; j < result.mean_error.size(); ++j) {
        os << (j + 1) << ',' << result.mean_error[j] << ',' << result.std_error[j] << "\n";
    }
    return os.str();
}

TraceFactory make_trace_factory(const fs::path& dir) {
    return [dir](int rep, int iteration) -> TraceSink {
        if (rep != 0) {
            return nullptr;  // one traced repetition is enough for plots
        }
        auto out = std::make_shared<std::ofstream>(
            dir / ("trace_iter" + std::to_string(iteration) + ".csv"));
        *out << "t,axis,r2,r2_dot,y1_meas,y2_meas,y1_true,y2_true,u,r1,sigma_hat,y1_hat,ytilde,d\n";
        return [out](const TraceSample& s) {
            static const char* axis_names[3] = {"x", "y", "z"};
            for (int a = 0; a < 3; ++a) {
                *out << s.t << ',' << axis_names[a] << ',' << s.r2(a) << ',' << s.r2_dot(a)
                     << ',' << s.y1_meas(a) << ',' << s.y2_meas(a) << ',' << s.y1_true(a)
                     << ',' << s.y2_true(a) << ',' << s.u(a) << ',' << s.r1(a) << ','
                     << s.sigma_hat(a) << ',' << s.y1_hat(a) << ','
                     << s.y1_hat(a) - s.y1_meas(a) << ',' << s.d_true(a) << "\n";
            }
        };
    };
}

int execute_scenario(ScenarioConfig cfg, std::optional<double> donor_converged = {}) {
    const ScenarioPlan plan = make_plan(cfg);
    std::cout << "scenario '" << cfg.name << "': plant=" << cfg.plant
              << " controller=" << to_string(cfg.controller)
              << " init=" << to_string(cfg.init_mode) << " iterations=" << cfg.iterations
              << " repetitions=" << cfg.repetitions << "\n";
    if (cfg.controller == ControllerKind::l1) {
        for (const L1AxisConfig& axis : cfg.l1_axes()) {
            if (axis.adaptation_rate_warning()) {
                std::cerr << "warning: adaptation loop gain Gamma*m*P*dt = "
                          << axis.Gamma * axis.m * axis.lyapunov_weight() * axis.dt
                          << " is at or above the Euler warning threshold 2\n";
                break;
            }
        }
    }

    TraceFactory traces;
    fs::path out_dir;
    if (!cfg.out_dir.empty()) {
        out_dir = cfg.out_dir;
        fs::create_directories(out_dir);
        if (cfg.trace) {
            traces = make_trace_factory(out_dir);
        }
    }

    const ScenarioResult result = run_scenario(plan, traces);
    for (size_t j = 0; j < result.mean_error.size(); ++j) {
        std::cout << "  iter " << (j + 1) << ": e = " << result.mean_error[j];
        if (cfg.repetitions > 1) {
            std::cout << " (std " << result.std_error[j] << ")";
        }
        std::cout << "\n";
    }

    if (!out_dir.empty()) {
        write_file((out_dir / "iterations.csv").string(), iterations_csv(result));
        export_learning(result.final_state, (out_dir / "learning_state.json").string());
        RunSummary summary = make_summary(cfg, result);
        summary.donor_converged_error = donor_converged;
        write_file((out_dir / "summary.json").string(), summary_to_json(summary));
        std::cout << "outputs written to " << out_dir.string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Adaptive-control + iterative-learning trajectory workbench"};
    app.require_subcommand(1);

    // run
    std::string scenario_path, out_dir;
    unsigned long long seed = 0;
    bool seed_set = false;
    int reps = 0;
    auto* run_cmd = app.add_subcommand("run", "Run a scenario file");
    run_cmd->add_option("scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("--seed", seed, "Override the scenario seed")
        ->each([&](const std::string&) { seed_set = true; });
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--reps", reps, "Override the repetition count");

    // transfer
    std::string from_path, transfer_scenario, transfer_out, donor_summary_path;
    bool force = false;
    auto* transfer_cmd =
        app.add_subcommand("transfer", "Import a learning state and continue learning");
    transfer_cmd->add_option("--from", from_path, "Exported learning-state JSON")->required();
    transfer_cmd->add_option("--scenario", transfer_scenario, "Recipient scenario file")
        ->required();
    transfer_cmd->add_option("--out", transfer_out, "Output directory");
    transfer_cmd->add_option("--donor-summary", donor_summary_path,
                             "Donor summary.json; links the transfer factor into reports");
    transfer_cmd->add_flag("--force", force, "Import despite a model fingerprint mismatch");

    // check-l1
    std::string plant_arg, ctrl_cfg_path;
    auto* check_cmd =
        app.add_subcommand("check-l1", "Evaluate the small-gain design condition");
    check_cmd->add_option("plant", plant_arg, "Plant preset name or plant JSON path")
        ->required();
    check_cmd->add_option("config", ctrl_cfg_path, "Scenario-format controller config")
        ->required();

    // report
    std::string results_dir, report_out;
    auto* report_cmd = app.add_subcommand("report", "Aggregate run summaries into a table");
    report_cmd->add_option("results", results_dir, "Directory of run output folders")
        ->required();
    report_cmd->add_option("--out", report_out, "Write report.csv/report.txt here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            ScenarioConfig cfg = load_scenario(scenario_path);
            if (seed_set) cfg.seed = seed;
            if (reps > 0) cfg.repetitions = reps;
            if (!out_dir.empty()) cfg.out_dir = out_dir;
            return execute_scenario(std::move(cfg));
        }

        if (*transfer_cmd) {
            ScenarioConfig cfg = load_scenario(transfer_scenario);
            cfg.init_mode = InitMode::transfer;
            cfg.transfer_path = from_path;
            cfg.allow_model_mismatch = cfg.allow_model_mismatch || force;
            if (!transfer_out.empty()) cfg.out_dir = transfer_out;
            std::optional<double> donor_converged;
            if (!donor_summary_path.empty()) {
                const RunSummary donor = summary_from_json(read_file(donor_summary_path));
                const auto& e = donor.mean_error;
                double acc = 0.0;
                size_t cnt = 0;
                for (size_t j = (e.size() >= 10 ? 7 : e.size() - 1); j < e.size() && cnt < 3;
                     ++j, ++cnt) {
                    acc += e[j];
                }
                donor_converged = acc / static_cast<double>(cnt);
            }
            return execute_scenario(std::move(cfg), donor_converged);
        }

        if (*check_cmd) {
            const ScenarioConfig cfg = load_scenario(ctrl_cfg_path);
            PlantConfig pc;
            if (plant_arg == "slow" || plant_arg == "fast") {
                pc = plant_arg == "slow" ? vehicle_presets().first : vehicle_presets().second;
            } else {
                pc = plant_from_json(read_file(plant_arg));
            }
            const std::array<double, 3> cutoffs = preset_filter_cutoffs(pc.name);
            bool all_pass = true;
            static const char* axis_names[3] = {"x", "y", "z"};
            for (int a = 0; a < 3; ++a) {
                const double omega =
                    cfg.omega(a) > 0.0 ? cfg.omega(a) : cutoffs[static_cast<size_t>(a)];
                const RationalTF M = RationalTF::first_order_lowpass(cfg.m(a));
                const RationalTF C = RationalTF::first_order_lowpass(omega);
                const ConditionReport rep = check_l1_condition(
                    pc.axis_tf[static_cast<size_t>(a)], M, C, cfg.k(a), cfg.lipschitz_L);
                std::cout << "axis " << axis_names[a] << " (m=" << cfg.m(a)
                          << ", omega=" << omega << ", K=" << cfg.k(a)
                          << ", L=" << cfg.lipschitz_L << ")\n"
                          << rep.to_string() << "\n\n";
                all_pass = all_pass && rep.pass;
            }
            return all_pass ? 0 : 2;
        }

        if (*report_cmd) {
            std::vector<RunSummary> runs;
            for (const auto& entry : fs::recursive_directory_iterator(results_dir)) {
                if (entry.is_regular_file() && entry.path().filename() == "summary.json") {
                    runs.push_back(summary_from_json(read_file(entry.path().string())));
                }
            }
            std::sort(runs.begin(), runs.end(), [](const RunSummary& a, const RunSummary& b) {
                return std::tie(a.init_mode, a.framework, a.name) <
                       std::tie(b.init_mode, b.framework, b.name);
            });
            const CompareReport rep = compare_report(runs);
            std::cout << rep.to_text();
            if (!report_out.empty()) {
                fs::create_directories(report_out);
                write_file((fs::path(report_out) / "report.csv").string(), rep.to_csv());
                write_file((fs::path(report_out) / "report.txt").string(), rep.to_text());
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
