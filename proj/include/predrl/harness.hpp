#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "predrl/core.hpp"
#include "predrl/envs.hpp"

namespace predrl {
namespace harness {

struct ExperimentConfig {
    std::string env = "plinko";       // "plinko" or "chain:N"
    std::string algo = "td-pr";       // td-lambda | td-pr | td-pf | et
    LearnerConfig learner;
    int episodes = 500;
    std::vector<std::uint64_t> seeds = {0};
    int eval_every = 1;
    std::string out;
    int jobs = 1;                     // seeds evaluated concurrently

    void validate() const;  // throws std::invalid_argument
};

struct MetricRow {
    std::string algo;
    std::string env;
    std::uint64_t seed = 0;
    int episode = 0;
    double rmse = 0.0;        // NaN marks a divergence diagnostic row
    double episode_return = 0.0;
    double alpha_v = 0.0, alpha_m = 0.0, gamma = 0.0, lambda = 0.0, eta = 0.0;
    double axis_value = 0.0;  // echoed sweep-axis value (0 outside sweeps)
    bool diverged = false;
};

using RunResult = std::vector<MetricRow>;

double rmse(const Eigen::VectorXd& v_est, const Eigen::VectorXd& v_true,
            const std::vector<StateId>& mask);

TabularMdp make_env(const std::string& name);

/// Runs cfg.episodes episodes per seed (each seed is an independent stream;
/// two algorithms run with the same seed consume identical episodes) and
/// records RMSE against the exact value function plus the episode return
/// every eval_every episodes. A non-finite learner state aborts that seed
/// with a single NaN diagnostic row.
RunResult run_experiment(const ExperimentConfig& cfg);

RunResult sweep(const ExperimentConfig& base, const std::string& axis,
                const std::vector<double>& values);

static constexpr const char* kCsvHeader =
    "algo,env,seed,episode,rmse,return,alpha_v,alpha_m,gamma,lambda,eta";

void write_csv(const RunResult& rows, const std::string& path);
RunResult read_csv(const std::string& path);

/// Oracle quantity export: what in {value, sr-inclusive, sr-strict, ztrace, visits}.
void export_oracle(const std::string& env, const std::string& what, double kappa,
                   const std::string& path);

/// 6x6 (generally sqrt(n) x sqrt(n)) shaded-cell SVG plus a raw CSV grid
/// next to it (same path with .csv appended).
void export_heatmap(const Eigen::VectorXd& vec, const std::string& path);

/// Mean learning curve per algorithm with a per-seed min/max band.
void emit_learning_curves(const RunResult& rows, const std::string& metric,
                          const std::string& path);

/// CLI entry point. Exit codes: 0 ok, 1 config error, 2 all seeds diverged.
int run_cli(int argc, char** argv);

}  // namespace harness
}  // namespace predrl
