#include <doctest.h>

#include "predrl/envs.hpp"
#include "predrl/linear.hpp"
#include "predrl/oracle.hpp"

using namespace predrl;

TEST_CASE("linear_value is a dot product") {
    Eigen::VectorXd w(2), x(2);
    w << 1, 2;
    x << 0.5, 0.5;
    CHECK(linear_value(w, x) == 1.5);
    CHECK(linear_value(Eigen::VectorXd::Zero(2), x) == 0.0);
    Eigen::VectorXd onehot = Eigen::VectorXd::Zero(2);
    onehot(1) = 1.0;
    CHECK(linear_value(w, onehot) == 2.0);
}

TEST_CASE("td_error handles terminal successors and Bellman consistency") {
    const FeatureMap f = one_hot_features(5);
    Eigen::VectorXd w = Eigen::VectorXd::Zero(5);
    CHECK(td_error(w, Transition{1, 2, 1.0, false}, f, 1.0) == 1.0);

    w(1) = 0.3;
    CHECK(td_error(w, Transition{1, 4, 0.0, true}, f, 1.0) == doctest::Approx(-0.3));

    const TabularMdp mdp = chain_mdp(5, 1.0);
    const Eigen::VectorXd v_true = oracle::true_values(mdp, 1.0);
    RngStream rng = make_rng(0);
    const Episode ep = generate_episode(mdp, rng);
    for (const Transition& t : ep.steps)
        CHECK(td_error(v_true, t, f, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("pf_target case split") {
    Eigen::VectorXd x(2), z(2), e(2);
    x << 0, 1;
    z << 1, 0;
    e << 2, 0;

    CHECK(pf_target(x, std::nullopt, std::nullopt, 1.0, 0.9, 0.5) == x);

    const Eigen::VectorXd y0 = pf_target(x, z, e, 1.0, 0.9, 0.0);
    CHECK(y0(0) == doctest::Approx(0.9));
    CHECK(y0(1) == doctest::Approx(1.0));

    // eta=1 recovers the accumulating-trace recursion e_t = lambda*gamma*e + x
    const Eigen::VectorXd y1 = pf_target(x, z, e, 1.0, 0.9, 1.0);
    CHECK(y1 == (0.9 * e + x).eval());

    // the target is an exact convex combination in eta
    const Eigen::VectorXd yh = pf_target(x, z, e, 1.0, 0.9, 0.5);
    CHECK((yh - 0.5 * (y0 + y1)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("psi_update structure") {
    Eigen::MatrixXd psi = Eigen::MatrixXd::Identity(3, 3);
    Eigen::VectorXd x = Eigen::VectorXd::Zero(3);
    x(1) = 1.0;

    SUBCASE("zero residual is a no-op") {
        const Eigen::MatrixXd before = psi;
        psi_update(psi, x, psi * x, 0.5);
        CHECK(psi == before);
    }
    SUBCASE("one-hot features touch a single column") {
        Eigen::VectorXd y(3);
        y << 1, 2, 3;
        const Eigen::MatrixXd before = psi;
        psi_update(psi, x, y, 0.25);
        CHECK(psi.col(0) == before.col(0));
        CHECK(psi.col(2) == before.col(2));
        CHECK((psi.col(1) - (before.col(1) - 0.25 * (before.col(1) - y))).isZero(1e-15));
    }
}

TEST_CASE("psi_update matches the finite-difference gradient") {
    RngStream rng = make_rng(17);
    auto draw = [&] { return 2.0 * rng.next_uniform() - 1.0; };
    const int d = 4;
    Eigen::MatrixXd psi(d, d);
    Eigen::VectorXd x(d), y(d);
    for (int i = 0; i < d; ++i) {
        x(i) = draw();
        y(i) = draw();
        for (int j = 0; j < d; ++j) psi(i, j) = draw();
    }
    const double beta = 0.3, h = 1e-5;
    Eigen::MatrixXd updated = psi;
    psi_update(updated, x, y, beta);
    const Eigen::MatrixXd increment = updated - psi;

    auto loss = [&](const Eigen::MatrixXd& p) { return 0.5 * (p * x - y).squaredNorm(); };
    Eigen::MatrixXd grad(d, d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            Eigen::MatrixXd plus = psi, minus = psi;
            plus(i, j) += h;
            minus(i, j) -= h;
            grad(i, j) = (loss(plus) - loss(minus)) / (2.0 * h);
        }
    }
    CHECK((increment + beta * grad).norm() / (beta * grad.norm()) < 1e-6);
}

TEST_CASE("TD-PF with a frozen identity Psi is linear TD(0)") {
    const TabularMdp mdp = chain_mdp(5, 0.5);
    const FeatureMap f = one_hot_features(5);
    LearnerConfig c;
    c.alpha_v = 0.1;
    c.alpha_m = 0.0;  // Psi stays at its identity init
    c.gamma = 1.0;
    c.lambda = 0.9;
    LinearPfState state = make_linear_pf(f, c);
    Eigen::VectorXd w_ref = Eigen::VectorXd::Zero(5);

    RngStream rng = make_rng(6);
    for (int k = 0; k < 100; ++k) {
        const Episode ep = generate_episode(mdp, rng);
        td_pf_episode(state, ep, f, c);
        for (const Transition& t : ep.steps) {
            const double delta = td_error(w_ref, t, f, c.gamma);
            w_ref += (c.alpha_v * delta) * f(t.from);
        }
        CHECK(state.w == w_ref);  // bitwise
    }
}

TEST_CASE("et with eta=0 is bitwise td_pf") {
    const TabularMdp mdp = plinko_mdp();
    const FeatureMap f = one_hot_features(36);
    LearnerConfig c;
    c.alpha_v = 0.01;
    c.alpha_m = 0.1;
    c.gamma = 1.0;
    c.lambda = 0.9;
    c.eta = 0.0;
    LinearPfState a = make_linear_pf(f, c), b = make_linear_pf(f, c);
    RngStream r1 = make_rng(8), r2 = make_rng(8);
    for (int k = 0; k < 50; ++k) {
        td_pf_episode(a, generate_episode(mdp, r1), f, c);
        et_episode(b, generate_episode(mdp, r2), f, c);
    }
    CHECK(a.w == b.w);
    CHECK(a.psi == b.psi);
}

TEST_CASE("eta=1 on the deterministic chain recovers the exact traces") {
    const TabularMdp mdp = chain_mdp(5, 1.0);
    const FeatureMap f = one_hot_features(5);
    LearnerConfig c;
    c.alpha_v = 0.01;
    c.alpha_m = 0.2;
    c.gamma = 1.0;
    c.lambda = 0.9;
    c.eta = 1.0;
    LinearPfState state = make_linear_pf(f, c);
    RngStream rng = make_rng(0);
    for (int k = 0; k < 500; ++k) et_episode(state, generate_episode(mdp, rng), f, c);

    const oracle::ExpectedTraceResult z =
        oracle::expected_trace(mdp, c.gamma * c.lambda, 100);
    for (int s = 0; s < 5; ++s) {
        if (!z.defined[static_cast<size_t>(s)]) continue;
        CHECK((state.psi * f(s) - z.z.col(s)).cwiseAbs().maxCoeff() < 1e-3);
    }
}

TEST_CASE("bootstrapped Psi also matches the expected-trace oracle on the chain") {
    const TabularMdp mdp = chain_mdp(5, 1.0);
    const FeatureMap f = one_hot_features(5);
    LearnerConfig c;
    c.alpha_v = 0.01;
    c.alpha_m = 0.2;
    c.gamma = 1.0;
    c.lambda = 0.9;
    LinearPfState state = make_linear_pf(f, c);
    RngStream rng = make_rng(0);
    for (int k = 0; k < 500; ++k) td_pf_episode(state, generate_episode(mdp, rng), f, c);

    const oracle::ExpectedTraceResult z =
        oracle::expected_trace(mdp, c.gamma * c.lambda, 100);
    for (int s = 0; s < 5; ++s) {
        if (!z.defined[static_cast<size_t>(s)]) continue;
        CHECK((state.psi * f(s) - z.z.col(s)).cwiseAbs().maxCoeff() < 1e-3);
    }
}

TEST_CASE("TD-PF converges on the random-walk chain at tuned rates") {
    const TabularMdp mdp = chain_mdp(5, 0.5);
    const FeatureMap f = one_hot_features(5);
    const Eigen::VectorXd v_true = oracle::true_values(mdp, 1.0);
    LearnerConfig c;
    c.alpha_v = 0.005;
    c.alpha_m = 0.05;
    c.gamma = 1.0;
    c.lambda = 0.9;
    LinearPfState state = make_linear_pf(f, c);
    RngStream rng = make_rng(0);
    for (int k = 0; k < 10000; ++k) td_pf_episode(state, generate_episode(mdp, rng), f, c);
    double sq = 0.0;
    for (int s : {1, 2, 3}) sq += std::pow(state.w(s) - v_true(s), 2);
    CHECK(std::sqrt(sq / 3.0) < 0.05);
}
