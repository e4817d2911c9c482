#pragma once

#include <Eigen/Dense>
#include <optional>

#include "predrl/core.hpp"
#include "predrl/envs.hpp"

namespace predrl {

double linear_value(const Eigen::VectorXd& w, const Eigen::VectorXd& x);

double td_error(const Eigen::VectorXd& w, const Transition& t, const FeatureMap& fmap,
                double gamma);

/// Target for the predecessor-feature regression. For an episode-initial
/// state (z_prev and e_prev absent) the target is just x_curr; otherwise
///   y = x_curr + lambda*gamma * ((1-eta)*z_prev + eta*e_prev).
/// eta = 0 is the fully bootstrapped target, eta = 1 the sampled trace.
Eigen::VectorXd pf_target(const Eigen::VectorXd& x_curr,
                          const std::optional<Eigen::VectorXd>& z_prev,
                          const std::optional<Eigen::VectorXd>& e_prev,
                          double gamma, double lambda, double eta);

/// One gradient step on 1/2 ||Psi x - y||^2 at fixed y:
///   Psi <- Psi - beta * (Psi x - y) x^T.
void psi_update(Eigen::MatrixXd& psi, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                double beta);

struct LinearPfState {
    Eigen::VectorXd w;
    Eigen::MatrixXd psi;
};

LinearPfState make_linear_pf(const FeatureMap& fmap, const LearnerConfig& config);

/// Linear TD-PF: fully bootstrapped trace targets (eta forced to 0).
void td_pf_episode(LinearPfState& state, const Episode& ep, const FeatureMap& fmap,
                   const LearnerConfig& config);

/// ET(lambda, eta): same as TD-PF but the Psi target mixes the bootstrapped
/// estimate with a sampled feature trace by eta.
void et_episode(LinearPfState& state, const Episode& ep, const FeatureMap& fmap,
                const LearnerConfig& config);

}  // namespace predrl
