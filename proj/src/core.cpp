#include "predrl/core.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "predrl/envs.hpp"

namespace predrl {

void LearnerConfig::validate() const {
    auto in_range = [](double x, double lo, double hi) { return x >= lo && x <= hi; };
    if (!(alpha_v > 0.0 && alpha_v <= 1.0)) throw std::invalid_argument("alpha_v must be in (0,1]");
    if (!(alpha_m >= 0.0 && alpha_m <= 1.0)) throw std::invalid_argument("alpha_m must be in [0,1]");
    if (!in_range(gamma, 0.0, 1.0)) throw std::invalid_argument("gamma must be in [0,1]");
    if (!in_range(lambda, 0.0, 1.0)) throw std::invalid_argument("lambda must be in [0,1]");
    if (!in_range(eta, 0.0, 1.0)) throw std::invalid_argument("eta must be in [0,1]");
}

namespace {

StateId sample_categorical(const Eigen::VectorXd& probs, RngStream& rng) {
    const double u = rng.next_uniform();
    double acc = 0.0;
    StateId last = -1;
    for (int s = 0; s < probs.size(); ++s) {
        if (probs(s) <= 0.0) continue;
        acc += probs(s);
        last = s;
        if (u < acc) return s;
    }
    // u landed in the rounding slack at the top of the cumulative sum
    return last;
}

}  // namespace

Episode generate_episode(const TabularMdp& mdp, RngStream& rng, int max_len_factor) {
    Episode ep;
    ep.initial = sample_categorical(mdp.start_dist, rng);
    const long max_steps = static_cast<long>(max_len_factor) * mdp.n_states;
    StateId s = ep.initial;
    while (!mdp.is_terminal(s)) {
        if (static_cast<long>(ep.steps.size()) >= max_steps) {
            throw std::runtime_error("generate_episode: exceeded " + std::to_string(max_steps) +
                                     " transitions without reaching a terminal state");
        }
        const StateId next = sample_categorical(mdp.P.row(s).transpose(), rng);
        ep.steps.push_back(Transition{s, next, mdp.rewards(s, next), mdp.is_terminal(next)});
        s = next;
    }
    return ep;
}

}  // namespace predrl
