#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "predrl/harness.hpp"
#include "predrl/tabular.hpp"

using namespace predrl;
using namespace predrl::harness;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp_path(const char* name) {
    return std::string("predrl_test_") + name;
}

bool rows_equal(const RunResult& a, const RunResult& b) {
    if (a.size() != b.size()) return false;
    for (size_t k = 0; k < a.size(); ++k) {
        const MetricRow &x = a[k], &y = b[k];
        if (x.algo != y.algo || x.seed != y.seed || x.episode != y.episode) return false;
        if (x.rmse != y.rmse && !(std::isnan(x.rmse) && std::isnan(y.rmse))) return false;
        if (x.episode_return != y.episode_return &&
            !(std::isnan(x.episode_return) && std::isnan(y.episode_return)))
            return false;
    }
    return true;
}

}  // namespace

TEST_CASE("rmse arithmetic") {
    Eigen::VectorXd a(2), b(2);
    a << 0, 1;
    b << 0, 0;
    CHECK(rmse(a, a, {0, 1}) == 0.0);
    CHECK(rmse(a, b, {0, 1}) == doctest::Approx(std::sqrt(0.5)));
    const Eigen::VectorXd shifted = b.array() + 0.1;
    CHECK(rmse(shifted, b, {0, 1}) == doctest::Approx(0.1));
    CHECK_THROWS_AS(rmse(a, b, {}), std::invalid_argument);
}

TEST_CASE("env names resolve or fail loudly") {
    CHECK(make_env("plinko").n_states == 36);
    CHECK(make_env("chain:9").n_states == 9);
    CHECK_THROWS_AS(make_env("chain:x"), std::invalid_argument);
    CHECK_THROWS_AS(make_env("gridworld"), std::invalid_argument);
}

TEST_CASE("one metric row per evaluated episode") {
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.algo = "td-lambda";
    cfg.episodes = 1;
    cfg.seeds = {0};
    const RunResult rows = run_experiment(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].episode == 1);
    CHECK(rows[0].rmse >= 0.0);
}

TEST_CASE("identical configs give bitwise-identical CSVs") {
    ExperimentConfig cfg;
    cfg.env = "plinko";
    cfg.algo = "td-pr";
    cfg.episodes = 20;
    cfg.seeds = {0, 1, 2};
    const std::string p1 = tmp_path("det1.csv"), p2 = tmp_path("det2.csv");
    write_csv(run_experiment(cfg), p1);
    write_csv(run_experiment(cfg), p2);
    CHECK(slurp(p1) == slurp(p2));
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}

TEST_CASE("parallel seed execution matches sequential") {
    ExperimentConfig cfg;
    cfg.env = "plinko";
    cfg.algo = "td-pf";
    cfg.episodes = 30;
    cfg.seeds = {0, 1, 2, 3, 4, 5};
    const RunResult seq = run_experiment(cfg);
    cfg.jobs = 4;
    const RunResult par = run_experiment(cfg);
    CHECK(rows_equal(seq, par));
}

TEST_CASE("every configured seed shows up, diverged or not") {
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.algo = "td-lambda";
    cfg.learner.alpha_v = 1.0;  // hot enough to blow up on the random walk
    cfg.learner.lambda = 1.0;
    cfg.episodes = 2000;
    cfg.seeds = {0, 1, 2, 3};
    const RunResult rows = run_experiment(cfg);
    std::set<std::uint64_t> seen;
    for (const MetricRow& r : rows) seen.insert(r.seed);
    CHECK(seen.size() == cfg.seeds.size());
}

TEST_CASE("single-value sweep equals the plain run") {
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.algo = "td-lambda";
    cfg.episodes = 25;
    cfg.seeds = {0, 1};
    const RunResult swept = sweep(cfg, "lambda", {0.0});
    ExperimentConfig direct = cfg;
    direct.learner.lambda = 0.0;
    CHECK(rows_equal(swept, run_experiment(direct)));
    CHECK_THROWS_AS(sweep(cfg, "beta", {0.1}), std::invalid_argument);
}

TEST_CASE("sweep row counting") {
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.algo = "td-pr";
    cfg.episodes = 20;
    cfg.eval_every = 5;
    cfg.seeds.clear();
    for (std::uint64_t s = 0; s < 30; ++s) cfg.seeds.push_back(s);
    const RunResult rows = sweep(cfg, "alpha_m", {0.01, 0.05, 0.1});
    CHECK(rows.size() == 3u * 30u * (20u / 5u));
}

TEST_CASE("CSV schema and round trip") {
    CHECK(std::string(kCsvHeader) ==
          "algo,env,seed,episode,rmse,return,alpha_v,alpha_m,gamma,lambda,eta");
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.algo = "et";
    cfg.learner.eta = 0.5;
    cfg.episodes = 10;
    cfg.seeds = {7};
    const RunResult rows = run_experiment(cfg);
    const std::string path = tmp_path("roundtrip.csv");
    write_csv(rows, path);
    const std::string text = slurp(path);
    CHECK(text.rfind(kCsvHeader, 0) == 0);
    CHECK(text.find('\r') == std::string::npos);  // LF endings
    const RunResult back = read_csv(path);
    REQUIRE(back.size() == rows.size());
    for (size_t k = 0; k < rows.size(); ++k) {
        CHECK(back[k].algo == rows[k].algo);
        CHECK(back[k].rmse == rows[k].rmse);  // shortest round-trip formatting
        CHECK(back[k].eta == rows[k].eta);
    }
    std::remove(path.c_str());
}

TEST_CASE("oracle exports") {
    const std::string path = tmp_path("oracle.csv");

    SUBCASE("plinko values, terminal row is zero") {
        export_oracle("plinko", "value", 1.0, path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        CHECK(line == "state,value");
        int count = 0;
        std::string row33;
        while (std::getline(in, line)) {
            if (line.rfind("33,", 0) == 0) row33 = line;
            ++count;
        }
        CHECK(count == 36);
        CHECK(row33 == "33,0");
    }
    SUBCASE("inclusive SR at kappa=0 is the identity") {
        export_oracle("chain:5", "sr-inclusive", 0.0, path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);  // header
        for (int i = 0; i < 5; ++i) {
            std::getline(in, line);
            std::ostringstream expect;
            expect << i;
            for (int j = 0; j < 5; ++j) expect << ',' << (i == j ? 1 : 0);
            CHECK(line == expect.str());
        }
    }
    SUBCASE("plinko visit export starts at one sixth") {
        export_oracle("plinko", "visits", 1.0, path);
        std::ifstream in(path);
        std::string line;
        std::getline(in, line);
        for (int s = 0; s < 6; ++s) {
            std::getline(in, line);
            const double v = std::stod(line.substr(line.find(',') + 1));
            CHECK(v == doctest::Approx(1.0 / 6.0));
        }
    }
    SUBCASE("unknown quantity fails") {
        CHECK_THROWS_AS(export_oracle("plinko", "qvalues", 1.0, path),
                        std::invalid_argument);
    }
    std::remove(path.c_str());
}

TEST_CASE("heatmap export") {
    const std::string path = tmp_path("heat.svg");
    const std::string grid = path + ".csv";

    SUBCASE("zero vector gives a blank grid") {
        export_heatmap(Eigen::VectorXd::Zero(36), path);
        const std::string csv = slurp(grid);
        for (char c : csv) CHECK((c == '0' || c == ',' || c == '\n'));
    }
    SUBCASE("onehot lights a single cell") {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(36);
        v(33) = 1.0;
        export_heatmap(v, path);
        std::ifstream in(grid);
        std::string line;
        for (int r = 0; r <= 5; ++r) std::getline(in, line);
        CHECK(line == "0,0,0,1,0,0");  // row 5, col 3
    }
    SUBCASE("non-square lengths are rejected") {
        CHECK_THROWS_AS(export_heatmap(Eigen::VectorXd::Zero(35), path),
                        std::invalid_argument);
    }
    std::remove(path.c_str());
    std::remove(grid.c_str());
}

TEST_CASE("credit vectors keep a memory of past episodes") {
    const TabularMdp mdp = plinko_mdp();
    LearnerConfig c;
    c.alpha_m = 0.1;
    c.m_init_mode = MInitMode::Zero;

    // Find a seed whose first two episodes enter a common state, then check
    // that this state's credit column carries mass from both trajectories.
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        RngStream rng = make_rng(seed);
        const Episode ep1 = generate_episode(mdp, rng);
        const Episode ep2 = generate_episode(mdp, rng);
        std::set<StateId> entered1, entered2, visited1, visited2;
        visited1.insert(ep1.initial);
        visited2.insert(ep2.initial);
        for (const Transition& t : ep1.steps) entered1.insert(t.to), visited1.insert(t.to);
        for (const Transition& t : ep2.steps) entered2.insert(t.to), visited2.insert(t.to);

        StateId shared = -1;
        for (StateId s : entered1)
            if (entered2.count(s) && s / 6 >= 2) shared = s;
        if (shared < 0) continue;
        StateId only1 = -1, only2 = -1;
        for (StateId s : visited1)
            if (!visited2.count(s) && s < shared) only1 = s;
        for (StateId s : visited2)
            if (!visited1.count(s) && s < shared) only2 = s;
        if (only1 < 0 || only2 < 0) continue;

        TdPrState state = make_td_pr(mdp, c);
        td_pr_episode(state, ep1);
        td_pr_episode(state, ep2);
        const Eigen::VectorXd credit = credit_vector(state, shared);
        CHECK(credit(only1) != 0.0);
        CHECK(credit(only2) != 0.0);
        return;
    }
    FAIL("no seed with overlapping first two episodes found");
}

TEST_CASE("learning-curve SVG is independent of row order") {
    ExperimentConfig cfg;
    cfg.env = "chain:5";
    cfg.episodes = 15;
    cfg.seeds = {0, 1, 2};
    cfg.algo = "td-pr";
    RunResult rows = run_experiment(cfg);
    cfg.algo = "td-lambda";
    const RunResult more = run_experiment(cfg);
    rows.insert(rows.end(), more.begin(), more.end());

    const std::string p1 = tmp_path("curve1.svg"), p2 = tmp_path("curve2.svg");
    emit_learning_curves(rows, "rmse", p1);
    std::mt19937 shuffler(123);
    std::shuffle(rows.begin(), rows.end(), shuffler);
    emit_learning_curves(rows, "rmse", p2);
    const std::string svg = slurp(p1);
    CHECK(svg == slurp(p2));
    CHECK(svg.find("td-pr") != std::string::npos);  // legend labels
    CHECK(svg.find("td-lambda") != std::string::npos);
    CHECK(svg.find("<polyline") != std::string::npos);
    std::remove(p1.c_str());
    std::remove(p2.c_str());
}
