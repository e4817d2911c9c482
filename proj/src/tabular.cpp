#include "predrl/tabular.hpp"

namespace predrl {

TdLambdaState make_td_lambda(const TabularMdp& mdp, const LearnerConfig& config) {
    config.validate();
    TdLambdaState state;
    state.v = Eigen::VectorXd::Zero(mdp.n_states);
    state.e = Eigen::VectorXd::Zero(mdp.n_states);
    state.config = config;
    return state;
}

void td_lambda_step(TdLambdaState& state, const Transition& t) {
    const LearnerConfig& c = state.config;
    state.e(t.from) += 1.0;
    const double bootstrap = t.to_is_terminal ? 0.0 : c.gamma * state.v(t.to);
    const double delta = t.reward + bootstrap - state.v(t.from);
    state.v += (c.alpha_v * delta) * state.e;
    state.e *= c.gamma * c.lambda;
}

void td_lambda_episode(TdLambdaState& state, const Episode& ep) {
    state.e.setZero();
    for (const Transition& t : ep.steps) td_lambda_step(state, t);
}

TdPrState make_td_pr(const TabularMdp& mdp, const LearnerConfig& config) {
    config.validate();
    TdPrState state;
    state.v = Eigen::VectorXd::Zero(mdp.n_states);
    state.m = Eigen::MatrixXd::Zero(mdp.n_states, mdp.n_states);
    if (config.m_init_mode == MInitMode::Identity) state.m.setIdentity();
    state.e = Eigen::VectorXd::Zero(mdp.n_states);
    state.config = config;
    return state;
}

void sr_td_update(Eigen::MatrixXd& m, const Eigen::VectorXd& e, StateId i, StateId j,
                  bool j_terminal, double beta, double bootstrap_discount) {
    // Evaluate the row target before touching m: the outer-product update
    // writes into the same rows it reads when the trace covers i or j.
    Eigen::RowVectorXd upd = -m.row(i);
    upd(j) += 1.0;
    if (!j_terminal) upd += bootstrap_discount * m.row(j);
    m += (beta * e) * upd;
}

void td_pr_episode(TdPrState& state, const Episode& ep) {
    const LearnerConfig& c = state.config;
    state.e.setZero();
    for (const Transition& t : ep.steps) {
        state.e(t.from) += 1.0;
        sr_td_update(state.m, state.e, t.from, t.to, t.to_is_terminal, c.alpha_m,
                     c.bootstrap_discount());
        const double bootstrap = t.to_is_terminal ? 0.0 : c.gamma * state.v(t.to);
        const double delta = t.reward + bootstrap - state.v(t.from);
        Eigen::VectorXd credit;
        switch (c.pr_credit_mode) {
            case PrCreditMode::ExpectedTrace:
                credit = (c.gamma * c.lambda) * state.m.col(t.from);
                credit(t.from) += 1.0;
                break;
            case PrCreditMode::EnteredColumn:
                credit = state.m.col(t.to);
                break;
            case PrCreditMode::LeftColumn:
                credit = state.m.col(t.from);
                break;
        }
        state.v += (c.alpha_v * delta) * credit;
        state.e *= c.gamma * c.lambda;
    }
}

Eigen::VectorXd credit_vector(const TdPrState& state, StateId s) {
    return state.m.col(s);
}

}  // namespace predrl
