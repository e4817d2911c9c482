#pragma once

#include <Eigen/Dense>

#include "predrl/core.hpp"
#include "predrl/envs.hpp"

namespace predrl {

/// Online TD(lambda) with accumulating traces.
struct TdLambdaState {
    Eigen::VectorXd v;
    Eigen::VectorXd e;
    LearnerConfig config;
};

TdLambdaState make_td_lambda(const TabularMdp& mdp, const LearnerConfig& config);
void td_lambda_step(TdLambdaState& state, const Transition& t);
void td_lambda_episode(TdLambdaState& state, const Episode& ep);

/// TD-PR: learns the predecessor/successor matrix M by a trace-weighted TD
/// update and uses it to spread value credit.
struct TdPrState {
    Eigen::VectorXd v;
    Eigen::MatrixXd m;
    Eigen::VectorXd e;
    LearnerConfig config;
};

TdPrState make_td_pr(const TabularMdp& mdp, const LearnerConfig& config);

/// One TD update of M for the transition (i -> j). `e` must already hold the
/// incremented trace for i. For terminal j the bootstrap row is zero.
void sr_td_update(Eigen::MatrixXd& m, const Eigen::VectorXd& e, StateId i, StateId j,
                  bool j_terminal, double beta, double bootstrap_discount);

void td_pr_episode(TdPrState& state, const Episode& ep);

/// Column s of M, the credit-assignment vector exported for heatmaps.
Eigen::VectorXd credit_vector(const TdPrState& state, StateId s);

}  // namespace predrl
