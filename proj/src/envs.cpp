#include "predrl/envs.hpp"

#include <cmath>
#include <stdexcept>

namespace predrl {

void TabularMdp::validate() const {
    if (n_states <= 0) throw std::invalid_argument("mdp: n_states must be positive");
    if (P.rows() != n_states || P.cols() != n_states)
        throw std::invalid_argument("mdp: P must be n x n");
    if (start_dist.size() != n_states)
        throw std::invalid_argument("mdp: start_dist has wrong length");
    if (static_cast<int>(terminal.size()) != n_states)
        throw std::invalid_argument("mdp: terminal flags have wrong length");
    for (int s = 0; s < n_states; ++s) {
        const double row_sum = P.row(s).sum();
        if (terminal[static_cast<size_t>(s)]) {
            if (row_sum != 0.0)
                throw std::invalid_argument("mdp: terminal rows of P must be all zero");
        } else if (std::abs(row_sum - 1.0) > 1e-12) {
            throw std::invalid_argument("mdp: non-terminal row of P does not sum to 1");
        }
    }
    if (std::abs(start_dist.sum() - 1.0) > 1e-12)
        throw std::invalid_argument("mdp: start_dist does not sum to 1");
}

TabularMdp plinko_mdp() {
    constexpr int kSide = 6;
    constexpr int n = kSide * kSide;
    TabularMdp mdp;
    mdp.n_states = n;
    mdp.P = Eigen::MatrixXd::Zero(n, n);
    mdp.rewards = Eigen::MatrixXd::Zero(n, n);
    mdp.start_dist = Eigen::VectorXd::Zero(n);
    mdp.terminal.assign(n, false);

    auto id = [](int row, int col) { return kSide * row + col; };
    for (int row = 0; row < kSide - 1; ++row) {
        for (int col = 0; col < kSide; ++col) {
            const int s = id(row, col);
            if (col == 0) {
                mdp.P(s, id(row + 1, 1)) = 1.0;
            } else if (col == kSide - 1) {
                mdp.P(s, id(row + 1, kSide - 2)) = 1.0;
            } else {
                mdp.P(s, id(row + 1, col - 1)) = 0.5;
                mdp.P(s, id(row + 1, col + 1)) = 0.5;
            }
        }
    }
    for (int col = 0; col < kSide; ++col) mdp.terminal[static_cast<size_t>(id(kSide - 1, col))] = true;
    const int goal = id(kSide - 1, 3);
    mdp.rewards.col(goal).setOnes();  // reward rides on the transition entering the goal
    for (int col = 0; col < kSide; ++col) mdp.start_dist(col) = 1.0 / kSide;
    mdp.validate();
    return mdp;
}

TabularMdp chain_mdp(int n, double p_right) {
    if (n < 3) throw std::invalid_argument("chain_mdp: n must be >= 3");
    if (p_right < 0.0 || p_right > 1.0)
        throw std::invalid_argument("chain_mdp: p_right must be in [0,1]");
    TabularMdp mdp;
    mdp.n_states = n;
    mdp.P = Eigen::MatrixXd::Zero(n, n);
    mdp.rewards = Eigen::MatrixXd::Zero(n, n);
    mdp.start_dist = Eigen::VectorXd::Zero(n);
    mdp.terminal.assign(n, false);
    mdp.terminal[0] = true;
    mdp.terminal[static_cast<size_t>(n - 1)] = true;
    for (int i = 1; i < n - 1; ++i) {
        mdp.P(i, i + 1) = p_right;
        mdp.P(i, i - 1) = 1.0 - p_right;
    }
    mdp.rewards.col(n - 1).setOnes();
    mdp.start_dist((n - 1 + 1) / 2) = 1.0;  // ceil((n-1)/2)
    mdp.validate();
    return mdp;
}

FeatureMap one_hot_features(int n) {
    FeatureMap fmap;
    fmap.dim = n;
    fmap.features = Eigen::MatrixXd::Identity(n, n);
    return fmap;
}

FeatureMap row_col_features() {
    constexpr int kSide = 6;
    FeatureMap fmap;
    fmap.dim = 2 * kSide;
    fmap.features = Eigen::MatrixXd::Zero(kSide * kSide, 2 * kSide);
    for (int s = 0; s < kSide * kSide; ++s) {
        fmap.features(s, s / kSide) = 1.0;
        fmap.features(s, kSide + s % kSide) = 1.0;
    }
    return fmap;
}

}  // namespace predrl
