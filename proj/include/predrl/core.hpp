#pragma once

#include <cstdint>
#include <vector>

namespace predrl {

using StateId = int;

struct Transition {
    StateId from;
    StateId to;
    double reward;
    bool to_is_terminal;
};

/// A sampled trajectory. Consecutive transitions chain: steps[k].to == steps[k+1].from.
struct Episode {
    StateId initial;
    std::vector<Transition> steps;
};

/// Deterministic 64-bit stream (splitmix64). The generator is fixed by
/// constant so sequences are reproducible across platforms; never swap in
/// the platform default engine.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform draw in [0,1), 53 bits of precision.
    double next_uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

private:
    std::uint64_t state_;
};

inline RngStream make_rng(std::uint64_t seed) { return RngStream(seed); }

enum class SrDiscountMode { Gamma, GammaLambda };
enum class MInitMode { Zero, Identity };

/// How the value update turns the learned predecessor matrix into a credit
/// vector for the TD error of a transition (i -> j):
///   ExpectedTrace  : onehot(i) + gamma*lambda * M.col(i)  (default; stable)
///   EnteredColumn  : M.col(j)
///   LeftColumn     : M.col(i)
enum class PrCreditMode { ExpectedTrace, EnteredColumn, LeftColumn };

struct LearnerConfig {
    double alpha_v = 0.01;   // value learning rate
    double alpha_m = 0.1;    // matrix learning rate
    double gamma = 1.0;
    double lambda = 0.9;
    double eta = 0.0;        // trace-target bootstrap mix (0 = fully bootstrapped)
    SrDiscountMode sr_discount_mode = SrDiscountMode::Gamma;
    MInitMode m_init_mode = MInitMode::Identity;
    PrCreditMode pr_credit_mode = PrCreditMode::ExpectedTrace;

    double bootstrap_discount() const {
        return sr_discount_mode == SrDiscountMode::Gamma ? gamma : gamma * lambda;
    }
    void validate() const;
};

struct TabularMdp;  // envs.hpp

/// Samples one episode: start state from the start distribution, then follow
/// P until a terminal state. Throws if the episode exceeds
/// max_len_factor * n_states transitions (non-terminating chain guard).
Episode generate_episode(const TabularMdp& mdp, RngStream& rng, int max_len_factor = 10);

}  // namespace predrl
