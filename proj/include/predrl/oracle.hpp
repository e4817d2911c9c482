#pragma once

#include <Eigen/Dense>
#include <vector>

#include "predrl/core.hpp"
#include "predrl/envs.hpp"

namespace predrl {
namespace oracle {

/// Inclusive: M = (I - kappa*P)^-1, diagonal >= 1 (counts the current visit).
/// Strict:    P * (I - kappa*P)^-1, occupancies strictly after leaving a state.
enum class SrConvention { Inclusive, Strict };

/// Exact values via a dense linear solve of the Bellman system; terminal
/// states are pinned to 0. Throws on a singular system.
Eigen::VectorXd true_values(const TabularMdp& mdp, double gamma);

Eigen::MatrixXd successor_matrix(const TabularMdp& mdp, double kappa, SrConvention convention);

struct ExpectedTraceResult {
    /// Column j = E[sum_n kappa^n onehot(S_{t-n}) | S_t = j], averaged over
    /// arrival times within an episode.
    Eigen::MatrixXd z;
    /// defined[j] is false when state j is never visited (column is zero and
    /// meaningless).
    std::vector<bool> defined;
};

/// Forward DP over time-indexed visit distributions; O(horizon * |S|^2).
/// `horizon` must cover the maximum episode length.
ExpectedTraceResult expected_trace(const TabularMdp& mdp, double kappa, int horizon);

/// Per-episode probability that each state is ever visited (exact for the
/// layered/acyclic test MDPs where a state is visited at most once).
Eigen::VectorXd visit_probabilities(const TabularMdp& mdp, int horizon);

struct TraceIdentityResult {
    /// residual(i,j) = |M_strict(i,j) - (P(j)/P(i)) * E_hat[e(i) | arrived j]|,
    /// NaN where either state was never visited in the sample.
    Eigen::MatrixXd residual;
    double max_defined_residual = 0.0;
};

/// Monte Carlo check of the SR-column / expected-eligibility-trace identity.
TraceIdentityResult verify_sr_trace_identity(const TabularMdp& mdp, double kappa,
                                             long n_samples, RngStream& rng);

}  // namespace oracle
}  // namespace predrl
