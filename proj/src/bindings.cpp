#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "predrl/core.hpp"
#include "predrl/envs.hpp"
#include "predrl/harness.hpp"
#include "predrl/linear.hpp"
#include "predrl/oracle.hpp"
#include "predrl/tabular.hpp"

namespace py = pybind11;
using namespace predrl;

PYBIND11_MODULE(_predrl, m) {
    m.doc() = "Predecessor-representation policy evaluation: learners, exact oracles, harness";

    py::class_<Transition>(m, "Transition")
        .def_readonly("from_state", &Transition::from)
        .def_readonly("to_state", &Transition::to)
        .def_readonly("reward", &Transition::reward)
        .def_readonly("to_is_terminal", &Transition::to_is_terminal);

    py::class_<Episode>(m, "Episode")
        .def_readonly("initial", &Episode::initial)
        .def_readonly("steps", &Episode::steps)
        .def("__len__", [](const Episode& ep) { return ep.steps.size(); });

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t>())
        .def("next_u64", &RngStream::next_u64)
        .def("next_uniform", &RngStream::next_uniform);

    py::enum_<SrDiscountMode>(m, "SrDiscountMode")
        .value("GAMMA", SrDiscountMode::Gamma)
        .value("GAMMA_LAMBDA", SrDiscountMode::GammaLambda);
    py::enum_<MInitMode>(m, "MInitMode")
        .value("ZERO", MInitMode::Zero)
        .value("IDENTITY", MInitMode::Identity);
    py::enum_<PrCreditMode>(m, "PrCreditMode")
        .value("EXPECTED_TRACE", PrCreditMode::ExpectedTrace)
        .value("ENTERED_COLUMN", PrCreditMode::EnteredColumn)
        .value("LEFT_COLUMN", PrCreditMode::LeftColumn);

    py::class_<LearnerConfig>(m, "LearnerConfig")
        .def(py::init<>())
        .def_readwrite("alpha_v", &LearnerConfig::alpha_v)
        .def_readwrite("alpha_m", &LearnerConfig::alpha_m)
        .def_readwrite("gamma", &LearnerConfig::gamma)
        .def_readwrite("lambda_", &LearnerConfig::lambda)
        .def_readwrite("eta", &LearnerConfig::eta)
        .def_readwrite("sr_discount_mode", &LearnerConfig::sr_discount_mode)
        .def_readwrite("m_init_mode", &LearnerConfig::m_init_mode)
        .def_readwrite("pr_credit_mode", &LearnerConfig::pr_credit_mode)
        .def("bootstrap_discount", &LearnerConfig::bootstrap_discount)
        .def("validate", &LearnerConfig::validate);

    py::class_<TabularMdp>(m, "TabularMdp")
        .def_readonly("n_states", &TabularMdp::n_states)
        .def_readonly("P", &TabularMdp::P)
        .def_readonly("rewards", &TabularMdp::rewards)
        .def_readonly("start_dist", &TabularMdp::start_dist)
        .def_readonly("terminal", &TabularMdp::terminal)
        .def("is_terminal", &TabularMdp::is_terminal)
        .def("validate", &TabularMdp::validate);

    py::class_<FeatureMap>(m, "FeatureMap")
        .def_readonly("dim", &FeatureMap::dim)
        .def_readonly("features", &FeatureMap::features)
        .def("__call__", &FeatureMap::operator());

    m.def("plinko_mdp", &plinko_mdp);
    m.def("chain_mdp", &chain_mdp, py::arg("n"), py::arg("p_right"));
    m.def("one_hot_features", &one_hot_features, py::arg("n"));
    m.def("row_col_features", &row_col_features);
    m.def("generate_episode", &generate_episode, py::arg("mdp"), py::arg("rng"),
          py::arg("max_len_factor") = 10);

    py::class_<TdLambdaState>(m, "TdLambdaState")
        .def_readwrite("v", &TdLambdaState::v)
        .def_readwrite("e", &TdLambdaState::e);
    m.def("make_td_lambda", &make_td_lambda);
    m.def("td_lambda_step", &td_lambda_step);
    m.def("td_lambda_episode", &td_lambda_episode);

    py::class_<TdPrState>(m, "TdPrState")
        .def_readwrite("v", &TdPrState::v)
        .def_readwrite("m", &TdPrState::m)
        .def_readwrite("e", &TdPrState::e);
    m.def("make_td_pr", &make_td_pr);
    m.def("td_pr_episode", &td_pr_episode);
    m.def("sr_td_update",
          [](Eigen::Ref<Eigen::MatrixXd> mat, const Eigen::VectorXd& e, StateId i, StateId j,
             bool j_terminal, double beta, double kb) {
              Eigen::MatrixXd tmp = mat;
              sr_td_update(tmp, e, i, j, j_terminal, beta, kb);
              mat = tmp;
          },
          py::arg("m"), py::arg("e"), py::arg("i"), py::arg("j"), py::arg("j_terminal"),
          py::arg("beta"), py::arg("bootstrap_discount"));
    m.def("credit_vector", &credit_vector);

    py::class_<LinearPfState>(m, "LinearPfState")
        .def_readwrite("w", &LinearPfState::w)
        .def_readwrite("psi", &LinearPfState::psi);
    m.def("make_linear_pf", &make_linear_pf);
    m.def("td_pf_episode", &td_pf_episode);
    m.def("et_episode", &et_episode);
    m.def("linear_value", &linear_value);
    m.def("td_error", &td_error);
    m.def("pf_target", &pf_target, py::arg("x_curr"), py::arg("z_prev"), py::arg("e_prev"),
          py::arg("gamma"), py::arg("lambda_"), py::arg("eta"));

    auto oracle_mod = m.def_submodule("oracle", "exact dynamic-programming references");
    py::enum_<oracle::SrConvention>(oracle_mod, "SrConvention")
        .value("INCLUSIVE", oracle::SrConvention::Inclusive)
        .value("STRICT", oracle::SrConvention::Strict);
    oracle_mod.def("true_values", &oracle::true_values, py::arg("mdp"), py::arg("gamma"));
    oracle_mod.def("successor_matrix", &oracle::successor_matrix, py::arg("mdp"),
                   py::arg("kappa"), py::arg("convention"));
    oracle_mod.def("expected_trace",
                   [](const TabularMdp& mdp, double kappa, int horizon) {
                       auto r = oracle::expected_trace(mdp, kappa, horizon);
                       return py::make_tuple(r.z, r.defined);
                   },
                   py::arg("mdp"), py::arg("kappa"), py::arg("horizon"));
    oracle_mod.def("visit_probabilities", &oracle::visit_probabilities, py::arg("mdp"),
                   py::arg("horizon"));
    oracle_mod.def("verify_sr_trace_identity",
                   [](const TabularMdp& mdp, double kappa, long n_samples, std::uint64_t seed) {
                       RngStream rng = make_rng(seed);
                       auto r = oracle::verify_sr_trace_identity(mdp, kappa, n_samples, rng);
                       return py::make_tuple(r.residual, r.max_defined_residual);
                   },
                   py::arg("mdp"), py::arg("kappa"), py::arg("n_samples"), py::arg("seed"));

    auto hmod = m.def_submodule("harness", "experiment runner and exporters");
    py::class_<harness::ExperimentConfig>(hmod, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("env", &harness::ExperimentConfig::env)
        .def_readwrite("algo", &harness::ExperimentConfig::algo)
        .def_readwrite("learner", &harness::ExperimentConfig::learner)
        .def_readwrite("episodes", &harness::ExperimentConfig::episodes)
        .def_readwrite("seeds", &harness::ExperimentConfig::seeds)
        .def_readwrite("eval_every", &harness::ExperimentConfig::eval_every)
        .def_readwrite("out", &harness::ExperimentConfig::out)
        .def_readwrite("jobs", &harness::ExperimentConfig::jobs)
        .def("validate", &harness::ExperimentConfig::validate);

    py::class_<harness::MetricRow>(hmod, "MetricRow")
        .def_readonly("algo", &harness::MetricRow::algo)
        .def_readonly("env", &harness::MetricRow::env)
        .def_readonly("seed", &harness::MetricRow::seed)
        .def_readonly("episode", &harness::MetricRow::episode)
        .def_readonly("rmse", &harness::MetricRow::rmse)
        .def_readonly("episode_return", &harness::MetricRow::episode_return)
        .def_readonly("alpha_v", &harness::MetricRow::alpha_v)
        .def_readonly("alpha_m", &harness::MetricRow::alpha_m)
        .def_readonly("gamma", &harness::MetricRow::gamma)
        .def_readonly("lambda_", &harness::MetricRow::lambda)
        .def_readonly("eta", &harness::MetricRow::eta)
        .def_readonly("axis_value", &harness::MetricRow::axis_value)
        .def_readonly("diverged", &harness::MetricRow::diverged);

    hmod.def("rmse", &harness::rmse, py::arg("v_est"), py::arg("v_true"), py::arg("mask"));
    hmod.def("make_env", &harness::make_env);
    hmod.def("run_experiment", &harness::run_experiment);
    hmod.def("sweep", &harness::sweep, py::arg("base"), py::arg("axis"), py::arg("values"));
    hmod.def("write_csv", &harness::write_csv);
    hmod.def("read_csv", &harness::read_csv);
    hmod.def("export_oracle", &harness::export_oracle, py::arg("env"), py::arg("what"),
             py::arg("kappa"), py::arg("path"));
    hmod.def("export_heatmap", &harness::export_heatmap, py::arg("vec"), py::arg("path"));
    hmod.def("emit_learning_curves", &harness::emit_learning_curves, py::arg("rows"),
             py::arg("metric"), py::arg("path"));
}
