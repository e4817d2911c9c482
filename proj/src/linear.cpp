#include "predrl/linear.hpp"

namespace predrl {

double linear_value(const Eigen::VectorXd& w, const Eigen::VectorXd& x) {
    return w.dot(x);
}

double td_error(const Eigen::VectorXd& w, const Transition& t, const FeatureMap& fmap,
                double gamma) {
    const double v_from = w.dot(fmap(t.from));
    const double bootstrap = t.to_is_terminal ? 0.0 : gamma * w.dot(fmap(t.to));
    return t.reward + bootstrap - v_from;
}

Eigen::VectorXd pf_target(const Eigen::VectorXd& x_curr,
                          const std::optional<Eigen::VectorXd>& z_prev,
                          const std::optional<Eigen::VectorXd>& e_prev,
                          double gamma, double lambda, double eta) {
    if (!z_prev && !e_prev) return x_curr;
    const double decay = lambda * gamma;
    // Keep eta = 0 and eta = 1 as exact branch paths so they reduce bitwise
    // to the pure bootstrapped / pure sampled variants.
    if (eta == 0.0) return x_curr + decay * *z_prev;
    if (eta == 1.0) return x_curr + decay * *e_prev;
    return x_curr + decay * ((1.0 - eta) * *z_prev + eta * *e_prev);
}

void psi_update(Eigen::MatrixXd& psi, const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                double beta) {
    if (beta == 0.0) return;
    const Eigen::VectorXd err = psi * x - y;
    psi.noalias() -= beta * err * x.transpose();
}

LinearPfState make_linear_pf(const FeatureMap& fmap, const LearnerConfig& config) {
    config.validate();
    LinearPfState state;
    state.w = Eigen::VectorXd::Zero(fmap.dim);
    state.psi = Eigen::MatrixXd::Identity(fmap.dim, fmap.dim);
    return state;
}

namespace {

void pf_episode_impl(LinearPfState& state, const Episode& ep, const FeatureMap& fmap,
                     const LearnerConfig& c, double eta) {
    if (ep.steps.empty()) return;
    const Eigen::VectorXd x0 = fmap(ep.initial);
    // The episode-initial state has an empty preceding trace, so its target
    // is its own feature vector.
    psi_update(state.psi, x0, x0, c.alpha_m);
    Eigen::VectorXd e_trace = x0;  // sampled feature trace, only read when eta > 0
    for (const Transition& t : ep.steps) {
        const Eigen::VectorXd x_i = fmap(t.from);
        const Eigen::VectorXd z = state.psi * x_i;
        const double delta = td_error(state.w, t, fmap, c.gamma);
        const Eigen::VectorXd x_j = fmap(t.to);
        const Eigen::VectorXd y = pf_target(x_j, z, e_trace, c.gamma, c.lambda, eta);
        psi_update(state.psi, x_j, y, c.alpha_m);
        state.w += (c.alpha_v * delta) * z;
        e_trace = (c.gamma * c.lambda) * e_trace + x_j;
    }
}

}  // namespace

void td_pf_episode(LinearPfState& state, const Episode& ep, const FeatureMap& fmap,
                   const LearnerConfig& config) {
    pf_episode_impl(state, ep, fmap, config, 0.0);
}

void et_episode(LinearPfState& state, const Episode& ep, const FeatureMap& fmap,
                const LearnerConfig& config) {
    pf_episode_impl(state, ep, fmap, config, config.eta);
}

}  // namespace predrl
