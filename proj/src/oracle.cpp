#include "predrl/oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace predrl {
namespace oracle {

namespace {

Eigen::MatrixXd solve_resolvent(const TabularMdp& mdp, double kappa) {
    const int n = mdp.n_states;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - kappa * mdp.P;
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    // PartialPivLU has no rank query; check the reconstruction instead.
    const Eigen::MatrixXd inv = lu.inverse();
    if (!inv.allFinite())
        throw std::runtime_error("oracle: (I - kappa*P) is singular; chain may be non-episodic");
    return inv;
}

}  // namespace

Eigen::VectorXd true_values(const TabularMdp& mdp, double gamma) {
    const Eigen::VectorXd expected_reward = (mdp.P.array() * mdp.rewards.array()).rowwise().sum();
    const Eigen::MatrixXd m = solve_resolvent(mdp, gamma);
    Eigen::VectorXd v = m * expected_reward;
    for (int s = 0; s < mdp.n_states; ++s)
        if (mdp.is_terminal(s)) v(s) = 0.0;  // terminal rows solve to ~0; pin exactly
    return v;
}

Eigen::MatrixXd successor_matrix(const TabularMdp& mdp, double kappa, SrConvention convention) {
    const Eigen::MatrixXd inclusive = solve_resolvent(mdp, kappa);
    if (convention == SrConvention::Inclusive) return inclusive;
    return mdp.P * inclusive;
}

ExpectedTraceResult expected_trace(const TabularMdp& mdp, double kappa, int horizon) {
    const int n = mdp.n_states;
    Eigen::VectorXd dist = mdp.start_dist;                     // P(S_t = s)
    Eigen::MatrixXd joint = Eigen::MatrixXd::Zero(n, n);       // sum_p kappa^p P(S_t=j, S_{t-p}=i)
    Eigen::MatrixXd numer = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd denom = Eigen::VectorXd::Zero(n);
    for (int t = 0; t <= horizon; ++t) {
        joint = kappa * (joint * mdp.P);
        joint.diagonal() += dist;
        numer += joint;
        denom += dist;
        dist = mdp.P.transpose() * dist;
    }
    ExpectedTraceResult result;
    result.z = Eigen::MatrixXd::Zero(n, n);
    result.defined.assign(n, false);
    for (int j = 0; j < n; ++j) {
        if (denom(j) > 0.0) {
            result.z.col(j) = numer.col(j) / denom(j);
            result.defined[static_cast<size_t>(j)] = true;
        }
    }
    return result;
}

Eigen::VectorXd visit_probabilities(const TabularMdp& mdp, int horizon) {
    Eigen::VectorXd dist = mdp.start_dist;
    Eigen::VectorXd visits = Eigen::VectorXd::Zero(mdp.n_states);
    for (int t = 0; t <= horizon; ++t) {
        visits += dist;
        dist = mdp.P.transpose() * dist;
    }
    return visits;
}

TraceIdentityResult verify_sr_trace_identity(const TabularMdp& mdp, double kappa,
                                             long n_samples, RngStream& rng) {
    if (n_samples < 1) throw std::invalid_argument("verify_sr_trace_identity: n_samples >= 1");
    const int n = mdp.n_states;
    const Eigen::MatrixXd m_strict = successor_matrix(mdp, kappa, SrConvention::Strict);

    Eigen::MatrixXd trace_sums = Eigen::MatrixXd::Zero(n, n);  // col j: sum of e over arrivals at j
    Eigen::VectorXd arrivals = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd e(n);
    for (long k = 0; k < n_samples; ++k) {
        const Episode ep = generate_episode(mdp, rng);
        e.setZero();
        arrivals(ep.initial) += 1.0;  // arrival at t=0, empty trace
        for (const Transition& t : ep.steps) {
            e *= kappa;
            e(t.from) += 1.0;          // e now holds the pre-arrival trace for t.to
            trace_sums.col(t.to) += e;
            arrivals(t.to) += 1.0;
        }
    }
    const double samples = static_cast<double>(n_samples);
    TraceIdentityResult result;
    result.residual =
        Eigen::MatrixXd::Constant(n, n, std::numeric_limits<double>::quiet_NaN());
    for (int i = 0; i < n; ++i) {
        if (arrivals(i) == 0.0) continue;
        for (int j = 0; j < n; ++j) {
            if (arrivals(j) == 0.0) continue;
            const double trace_mean = trace_sums(i, j) / arrivals(j);
            const double ratio = (arrivals(j) / samples) / (arrivals(i) / samples);
            const double res = std::abs(m_strict(i, j) - ratio * trace_mean);
            result.residual(i, j) = res;
            if (res > result.max_defined_residual) result.max_defined_residual = res;
        }
    }
    return result;
}

}  // namespace oracle
}  // namespace predrl
