#pragma once

#include <Eigen/Dense>
#include <vector>

#include "predrl/core.hpp"

namespace predrl {

/// Episodic Markov reward process. Terminal rows of P are all-zero (not
/// self-absorbing) so (I - kappa*P) is invertible even at kappa = 1.
struct TabularMdp {
    int n_states = 0;
    Eigen::MatrixXd P;         // row-stochastic on non-terminal rows
    Eigen::MatrixXd rewards;   // rewards(from, to)
    Eigen::VectorXd start_dist;
    std::vector<bool> terminal;

    bool is_terminal(StateId s) const { return terminal[static_cast<size_t>(s)]; }
    void validate() const;  // throws std::invalid_argument on malformed inputs
};

struct FeatureMap {
    int dim = 0;
    Eigen::MatrixXd features;  // n_states x dim, row s = x(s)

    Eigen::VectorXd operator()(StateId s) const { return features.row(s).transpose(); }
};

/// 6x6 Plinko board, states indexed 6*row + col with row 0 on top.
/// A ball starts uniformly in the top row, falls one row per step (left or
/// right with probability 1/2, deflected inward at the edges), and the
/// episode ends on reaching row 5. Reward 1 on the transition entering
/// state (5,3) = id 33, else 0.
TabularMdp plinko_mdp();

/// Random-walk chain with terminal endpoints 0 and n-1, reward 1 on entering
/// n-1, start at ceil((n-1)/2).
TabularMdp chain_mdp(int n, double p_right);

FeatureMap one_hot_features(int n);

/// 12-dim Plinko features: one-hot row concatenated with one-hot column.
FeatureMap row_col_features();

}  // namespace predrl
