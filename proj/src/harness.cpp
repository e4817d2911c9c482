#include "predrl/harness.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "predrl/linear.hpp"
#include "predrl/oracle.hpp"
#include "predrl/tabular.hpp"

namespace predrl {
namespace harness {

namespace {

std::string fmt(double x) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

double parse_double(const std::string& s) {
    try {
        size_t pos = 0;
        const double x = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument("");
        return x;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a number: '" + s + "'");
    }
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

enum class Algo { TdLambda, TdPr, TdPf, Et };

Algo parse_algo(const std::string& name) {
    if (name == "td-lambda") return Algo::TdLambda;
    if (name == "td-pr") return Algo::TdPr;
    if (name == "td-pf") return Algo::TdPf;
    if (name == "et") return Algo::Et;
    throw std::invalid_argument("unknown algo '" + name + "'");
}

std::vector<StateId> non_terminal_mask(const TabularMdp& mdp) {
    std::vector<StateId> mask;
    for (int s = 0; s < mdp.n_states; ++s)
        if (!mdp.is_terminal(s)) mask.push_back(s);
    return mask;
}

double episode_return(const Episode& ep, double gamma) {
    double g = 0.0, disc = 1.0;
    for (const Transition& t : ep.steps) {
        g += disc * t.reward;
        disc *= gamma;
    }
    return g;
}

MetricRow base_row(const ExperimentConfig& cfg, std::uint64_t seed) {
    MetricRow row;
    row.algo = cfg.algo;
    row.env = cfg.env;
    row.seed = seed;
    row.alpha_v = cfg.learner.alpha_v;
    row.alpha_m = cfg.learner.alpha_m;
    row.gamma = cfg.learner.gamma;
    row.lambda = cfg.learner.lambda;
    row.eta = cfg.learner.eta;
    return row;
}

RunResult run_one_seed(const ExperimentConfig& cfg, const TabularMdp& mdp,
                       const Eigen::VectorXd& v_true, const std::vector<StateId>& mask,
                       std::uint64_t seed) {
    const Algo algo = parse_algo(cfg.algo);
    RngStream rng = make_rng(seed);

    TdLambdaState td = make_td_lambda(mdp, cfg.learner);
    TdPrState pr = make_td_pr(mdp, cfg.learner);
    const FeatureMap fmap = one_hot_features(mdp.n_states);
    LinearPfState pf = make_linear_pf(fmap, cfg.learner);

    RunResult rows;
    for (int ep_idx = 1; ep_idx <= cfg.episodes; ++ep_idx) {
        // Random-walk envs have heavy-tailed episode lengths; the tight core
        // default of 10*n would occasionally trip on legitimate episodes.
        const Episode ep = generate_episode(mdp, rng, 1000);
        Eigen::VectorXd v_est;
        bool finite = true;
        switch (algo) {
            case Algo::TdLambda:
                td_lambda_episode(td, ep);
                v_est = td.v;
                finite = td.v.allFinite();
                break;
            case Algo::TdPr:
                td_pr_episode(pr, ep);
                v_est = pr.v;
                finite = pr.v.allFinite() && pr.m.allFinite();
                break;
            case Algo::TdPf:
                td_pf_episode(pf, ep, fmap, cfg.learner);
                v_est = fmap.features * pf.w;
                finite = pf.w.allFinite() && pf.psi.allFinite();
                break;
            case Algo::Et:
                et_episode(pf, ep, fmap, cfg.learner);
                v_est = fmap.features * pf.w;
                finite = pf.w.allFinite() && pf.psi.allFinite();
                break;
        }
        if (!finite) {
            MetricRow row = base_row(cfg, seed);
            row.episode = ep_idx;
            row.rmse = std::numeric_limits<double>::quiet_NaN();
            row.episode_return = std::numeric_limits<double>::quiet_NaN();
            row.diverged = true;
            rows.push_back(row);
            return rows;
        }
        if (ep_idx % cfg.eval_every == 0) {
            MetricRow row = base_row(cfg, seed);
            row.episode = ep_idx;
            row.rmse = rmse(v_est, v_true, mask);
            row.episode_return = episode_return(ep, cfg.learner.gamma);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace

void ExperimentConfig::validate() const {
    learner.validate();
    if (episodes < 1) throw std::invalid_argument("episodes must be >= 1");
    if (seeds.empty()) throw std::invalid_argument("seed list must be non-empty");
    if (eval_every < 1) throw std::invalid_argument("eval_every must be >= 1");
    if (jobs < 1) throw std::invalid_argument("jobs must be >= 1");
    parse_algo(algo);
    make_env(env);
}

double rmse(const Eigen::VectorXd& v_est, const Eigen::VectorXd& v_true,
            const std::vector<StateId>& mask) {
    if (v_est.size() != v_true.size()) throw std::invalid_argument("rmse: length mismatch");
    if (mask.empty()) throw std::invalid_argument("rmse: empty mask");
    double acc = 0.0;
    for (StateId s : mask) {
        const double d = v_est(s) - v_true(s);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(mask.size()));
}

TabularMdp make_env(const std::string& name) {
    if (name == "plinko") return plinko_mdp();
    if (name.rfind("chain:", 0) == 0) {
        const std::string num = name.substr(6);
        int n = 0;
        try {
            size_t pos = 0;
            n = std::stoi(num, &pos);
            if (pos != num.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad chain length in env '" + name + "'");
        }
        return chain_mdp(n, 0.5);
    }
    throw std::invalid_argument("unknown env '" + name + "' (expected plinko or chain:N)");
}

RunResult run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();
    const TabularMdp mdp = make_env(cfg.env);
    const Eigen::VectorXd v_true = oracle::true_values(mdp, cfg.learner.gamma);
    const std::vector<StateId> mask = non_terminal_mask(mdp);

    RunResult rows;
    if (cfg.jobs <= 1 || cfg.seeds.size() == 1) {
        for (std::uint64_t seed : cfg.seeds) {
            RunResult r = run_one_seed(cfg, mdp, v_true, mask, seed);
            rows.insert(rows.end(), r.begin(), r.end());
        }
        return rows;
    }
    std::vector<std::future<RunResult>> futures;
    futures.reserve(cfg.seeds.size());
    for (std::uint64_t seed : cfg.seeds) {
        futures.push_back(std::async(std::launch::async, [&, seed] {
            return run_one_seed(cfg, mdp, v_true, mask, seed);
        }));
    }
    // Merge in seed order so the output is identical to the sequential path.
    for (auto& f : futures) {
        RunResult r = f.get();
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

RunResult sweep(const ExperimentConfig& base, const std::string& axis,
                const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("sweep: empty value list");
    RunResult rows;
    for (double value : values) {
        ExperimentConfig cfg = base;
        if (axis == "alpha_v") cfg.learner.alpha_v = value;
        else if (axis == "alpha_m") cfg.learner.alpha_m = value;
        else if (axis == "lambda") cfg.learner.lambda = value;
        else if (axis == "gamma") cfg.learner.gamma = value;
        else if (axis == "eta") cfg.learner.eta = value;
        else throw std::invalid_argument("unknown sweep axis '" + axis + "'");
        RunResult r = run_experiment(cfg);
        for (MetricRow& row : r) row.axis_value = value;
        rows.insert(rows.end(), r.begin(), r.end());
    }
    return rows;
}

void write_csv(const RunResult& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << kCsvHeader << "\n";
    for (const MetricRow& r : rows) {
        out << r.algo << ',' << r.env << ',' << r.seed << ',' << r.episode << ','
            << fmt(r.rmse) << ',' << fmt(r.episode_return) << ',' << fmt(r.alpha_v) << ','
            << fmt(r.alpha_m) << ',' << fmt(r.gamma) << ',' << fmt(r.lambda) << ','
            << fmt(r.eta) << "\n";
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

RunResult read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV '" + path + "'");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) throw std::runtime_error("unexpected CSV header in '" + path + "'");
    RunResult rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::vector<std::string> f = split(line, ',');
        if (f.size() != 11) throw std::runtime_error("malformed CSV row in '" + path + "'");
        MetricRow r;
        r.algo = f[0];
        r.env = f[1];
        r.seed = std::stoull(f[2]);
        r.episode = std::stoi(f[3]);
        r.rmse = std::strtod(f[4].c_str(), nullptr);
        r.episode_return = std::strtod(f[5].c_str(), nullptr);
        r.alpha_v = parse_double(f[6]);
        r.alpha_m = parse_double(f[7]);
        r.gamma = parse_double(f[8]);
        r.lambda = parse_double(f[9]);
        r.eta = parse_double(f[10]);
        r.diverged = std::isnan(r.rmse);
        rows.push_back(std::move(r));
    }
    return rows;
}

void export_oracle(const std::string& env, const std::string& what, double kappa,
                   const std::string& path) {
    const TabularMdp mdp = make_env(env);
    const int n = mdp.n_states;
    const int horizon = std::max(1000, 50 * n);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");

    auto write_vector = [&](const Eigen::VectorXd& v, const char* col_name) {
        out << "state," << col_name << "\n";
        for (int s = 0; s < n; ++s) out << s << ',' << fmt(v(s)) << "\n";
    };
    auto write_matrix = [&](const Eigen::MatrixXd& m) {
        out << "state";
        for (int j = 0; j < n; ++j) out << ',' << j;
        out << "\n";
        for (int i = 0; i < n; ++i) {
            out << i;
            for (int j = 0; j < n; ++j) out << ',' << fmt(m(i, j));
            out << "\n";
        }
    };

    if (what == "value") {
        write_vector(oracle::true_values(mdp, kappa), "value");
    } else if (what == "sr-inclusive") {
        write_matrix(oracle::successor_matrix(mdp, kappa, oracle::SrConvention::Inclusive));
    } else if (what == "sr-strict") {
        write_matrix(oracle::successor_matrix(mdp, kappa, oracle::SrConvention::Strict));
    } else if (what == "ztrace") {
        write_matrix(oracle::expected_trace(mdp, kappa, horizon).z);
    } else if (what == "visits") {
        write_vector(oracle::visit_probabilities(mdp, horizon), "visits");
    } else {
        throw std::invalid_argument("unknown oracle export '" + what + "'");
    }
    if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

void export_heatmap(const Eigen::VectorXd& vec, const std::string& path) {
    const int n = static_cast<int>(vec.size());
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n)
        throw std::invalid_argument("heatmap vector length must be a perfect square");

    const double max_abs = vec.cwiseAbs().maxCoeff();
    const int cell = 48, margin = 8;
    const int size = 2 * margin + side * cell;
    std::ofstream svg(path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open '" + path + "' for writing");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << size << "\" height=\""
        << size << "\">\n";
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            const double v = vec(side * r + c);
            const double t = max_abs > 0.0 ? std::abs(v) / max_abs : 0.0;
            svg << "<rect x=\"" << margin + c * cell << "\" y=\"" << margin + r * cell
                << "\" width=\"" << cell << "\" height=\"" << cell
                << "\" fill=\"#1f77b4\" fill-opacity=\"" << fmt(t)
                << "\" stroke=\"#888\" stroke-width=\"1\"/>\n";
        }
    }
    svg << "</svg>\n";
    if (!svg) throw std::runtime_error("write failed for '" + path + "'");

    std::ofstream csv(path + ".csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot open '" + path + ".csv' for writing");
    for (int r = 0; r < side; ++r) {
        for (int c = 0; c < side; ++c) {
            if (c > 0) csv << ',';
            csv << fmt(vec(side * r + c));
        }
        csv << "\n";
    }
}

namespace {

struct Curve {
    std::vector<int> episodes;
    std::vector<double> mean, lo, hi;
};

std::string svg_coord(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", x);
    return buf;
}

}  // namespace

void emit_learning_curves(const RunResult& rows, const std::string& metric,
                          const std::string& path) {
    if (rows.empty()) throw std::invalid_argument("emit_learning_curves: no rows");
    const bool use_return = metric == "return";
    if (!use_return && metric != "rmse")
        throw std::invalid_argument("unknown metric '" + metric + "' (expected rmse or return)");

    // Sorted maps make the output independent of input row order.
    std::map<std::string, std::map<int, std::vector<double>>> by_algo;
    for (const MetricRow& r : rows) {
        if (r.diverged) continue;
        by_algo[r.algo][r.episode].push_back(use_return ? r.episode_return : r.rmse);
    }
    if (by_algo.empty()) throw std::invalid_argument("emit_learning_curves: only diverged rows");

    std::map<std::string, Curve> curves;
    int ep_min = std::numeric_limits<int>::max(), ep_max = std::numeric_limits<int>::min();
    double y_min = std::numeric_limits<double>::infinity(), y_max = -y_min;
    for (auto& [algo, per_ep] : by_algo) {
        Curve c;
        for (auto& [ep, vals] : per_ep) {
            std::vector<double> v = vals;
            std::sort(v.begin(), v.end());
            double sum = 0.0;
            for (double x : v) sum += x;
            c.episodes.push_back(ep);
            c.mean.push_back(sum / static_cast<double>(v.size()));
            c.lo.push_back(v.front());
            c.hi.push_back(v.back());
            ep_min = std::min(ep_min, ep);
            ep_max = std::max(ep_max, ep);
            y_min = std::min(y_min, v.front());
            y_max = std::max(y_max, v.back());
        }
        curves.emplace(algo, std::move(c));
    }
    if (y_min == y_max) {
        y_min -= 0.5;
        y_max += 0.5;
    }
    if (ep_min == ep_max) ep_max = ep_min + 1;

    const double width = 720, height = 480;
    const double left = 64, right = 20, top = 24, bottom = 48;
    const double plot_w = width - left - right, plot_h = height - top - bottom;
    auto sx = [&](double ep) {
        return left + plot_w * (ep - ep_min) / static_cast<double>(ep_max - ep_min);
    };
    auto sy = [&](double y) { return top + plot_h * (1.0 - (y - y_min) / (y_max - y_min)); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b"};
    constexpr int kPaletteSize = 6;

    std::ofstream svg(path, std::ios::binary);
    if (!svg) throw std::runtime_error("cannot open '" + path + "' for writing");
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n";
    // axes
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double ep = ep_min + (ep_max - ep_min) * k / 4.0;
        const double y = y_min + (y_max - y_min) * k / 4.0;
        svg << "<text x=\"" << svg_coord(sx(ep)) << "\" y=\"" << svg_coord(top + plot_h + 16)
            << "\" text-anchor=\"middle\">" << svg_coord(ep) << "</text>\n";
        svg << "<text x=\"" << svg_coord(left - 6) << "\" y=\"" << svg_coord(sy(y) + 4)
            << "\" text-anchor=\"end\">" << svg_coord(y) << "</text>\n";
    }
    svg << "<text x=\"" << svg_coord(left + plot_w / 2) << "\" y=\"" << svg_coord(height - 10)
        << "\" text-anchor=\"middle\">episode</text>\n";
    svg << "<text x=\"14\" y=\"" << svg_coord(top + plot_h / 2)
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << svg_coord(top + plot_h / 2)
        << ")\">" << metric << "</text>\n";

    int idx = 0;
    for (const auto& [algo, c] : curves) {
        const char* color = kPalette[idx % kPaletteSize];
        // min/max band
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" stroke=\"none\" points=\"";
        for (size_t k = 0; k < c.episodes.size(); ++k)
            svg << svg_coord(sx(c.episodes[k])) << ',' << svg_coord(sy(c.hi[k])) << ' ';
        for (size_t k = c.episodes.size(); k-- > 0;)
            svg << svg_coord(sx(c.episodes[k])) << ',' << svg_coord(sy(c.lo[k])) << ' ';
        svg << "\"/>\n";
        // mean curve
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t k = 0; k < c.episodes.size(); ++k)
            svg << svg_coord(sx(c.episodes[k])) << ',' << svg_coord(sy(c.mean[k])) << ' ';
        svg << "\"/>\n";
        // legend entry
        const double ly = top + 8 + 16 * idx;
        svg << "<line x1=\"" << svg_coord(left + plot_w - 120) << "\" y1=\"" << svg_coord(ly)
            << "\" x2=\"" << svg_coord(left + plot_w - 96) << "\" y2=\"" << svg_coord(ly)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << svg_coord(left + plot_w - 90) << "\" y=\"" << svg_coord(ly + 4)
            << "\">" << algo << "</text>\n";
        ++idx;
    }
    svg << "</svg>\n";
    if (!svg) throw std::runtime_error("write failed for '" + path + "'");
}

namespace {

std::vector<std::uint64_t> parse_seeds(const std::string& spec) {
    std::vector<std::uint64_t> seeds;
    if (spec.find(',') != std::string::npos) {
        for (const std::string& tok : split(spec, ',')) {
            if (tok.empty()) throw std::invalid_argument("empty seed in list");
            seeds.push_back(std::stoull(tok));
        }
        return seeds;
    }
    // A single number means "this many seeds, 0..N-1".
    const std::uint64_t n = std::stoull(spec);
    if (n == 0) throw std::invalid_argument("seed count must be positive");
    for (std::uint64_t s = 0; s < n; ++s) seeds.push_back(s);
    return seeds;
}

std::vector<double> parse_value_list(const std::string& spec) {
    std::vector<double> values;
    for (const std::string& tok : split(spec, ','))
        values.push_back(parse_double(tok));
    return values;
}

void apply_config_key(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "env") cfg.env = value;
    else if (key == "algo") cfg.algo = value;
    else if (key == "alpha_v") cfg.learner.alpha_v = parse_double(value);
    else if (key == "alpha_m") cfg.learner.alpha_m = parse_double(value);
    else if (key == "gamma") cfg.learner.gamma = parse_double(value);
    else if (key == "lambda") cfg.learner.lambda = parse_double(value);
    else if (key == "eta") cfg.learner.eta = parse_double(value);
    else if (key == "episodes") cfg.episodes = std::stoi(value);
    else if (key == "seeds") cfg.seeds = parse_seeds(value);
    else if (key == "eval_every") cfg.eval_every = std::stoi(value);
    else if (key == "jobs") cfg.jobs = std::stoi(value);
    else if (key == "out") cfg.out = value;
    else throw std::invalid_argument("unknown config key '" + key + "'");
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
    ExperimentConfig cfg;
    std::string line;
    while (std::getline(in, line)) {
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::string key, value;
        if (!(ls >> key)) continue;
        const size_t eq = key.find('=');
        if (eq != std::string::npos) {
            value = key.substr(eq + 1);
            key.erase(eq);
            if (value.empty()) ls >> value;
        } else {
            ls >> value;
            if (value == "=") ls >> value;
        }
        if (value.empty()) throw std::invalid_argument("config line missing value: " + line);
        apply_config_key(cfg, key, value);
    }
    return cfg;
}

int divergence_exit(const RunResult& rows) {
    std::set<std::pair<double, std::uint64_t>> all, bad;
    for (const MetricRow& r : rows) {
        all.insert({r.axis_value, r.seed});
        if (r.diverged) bad.insert({r.axis_value, r.seed});
    }
    return (!all.empty() && bad.size() == all.size()) ? 2 : 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"Predecessor-representation policy evaluation experiments"};
    app.require_subcommand(1);

    ExperimentConfig cfg;
    std::string seeds_spec, values_spec, config_path, axis;
    bool has_seeds = false;

    auto add_learner_flags = [&](CLI::App* cmd, bool required_out) {
        cmd->add_option("--env", cfg.env, "plinko or chain:N");
        cmd->add_option("--algo", cfg.algo, "td-lambda | td-pr | td-pf | et");
        cmd->add_option("--alpha-v", cfg.learner.alpha_v, "value learning rate");
        cmd->add_option("--alpha-m", cfg.learner.alpha_m, "matrix learning rate");
        cmd->add_option("--gamma", cfg.learner.gamma, "discount");
        cmd->add_option("--lambda", cfg.learner.lambda, "trace decay");
        cmd->add_option("--eta", cfg.learner.eta, "trace-target mix (et only)");
        cmd->add_option("--episodes", cfg.episodes, "episodes per seed");
        cmd->add_option("--seeds", seeds_spec, "seed count N or comma list")
            ->each([&](const std::string&) { has_seeds = true; });
        cmd->add_option("--eval-every", cfg.eval_every, "evaluation stride");
        cmd->add_option("--jobs", cfg.jobs, "seeds run concurrently");
        auto* out = cmd->add_option("--out", cfg.out, "output CSV path");
        if (required_out) out->required();
    };

    CLI::App* run_cmd = app.add_subcommand("run", "single experiment, CSV metrics out");
    add_learner_flags(run_cmd, true);

    CLI::App* sweep_cmd = app.add_subcommand("sweep", "one run per axis value");
    sweep_cmd->add_option("--config", config_path, "flat key-value config file")->required();
    sweep_cmd->add_option("--axis", axis, "alpha_v | alpha_m | lambda | gamma | eta")->required();
    sweep_cmd->add_option("--values", values_spec, "comma-separated axis values")->required();
    add_learner_flags(sweep_cmd, false);

    std::string oracle_env = "plinko", oracle_what = "value", oracle_out;
    double oracle_kappa = 1.0;
    CLI::App* oracle_cmd = app.add_subcommand("oracle", "export exact quantities as CSV");
    oracle_cmd->add_option("--env", oracle_env, "plinko or chain:N");
    oracle_cmd->add_option("--what", oracle_what, "value | sr-inclusive | sr-strict | ztrace | visits")
        ->required();
    oracle_cmd->add_option("--kappa", oracle_kappa, "discount for the exported quantity");
    oracle_cmd->add_option("--out", oracle_out, "output CSV path")->required();

    std::vector<std::string> plot_inputs;
    std::string plot_metric = "rmse", plot_out;
    CLI::App* plot_cmd = app.add_subcommand("plot", "learning-curve SVG from metric CSVs");
    plot_cmd->add_option("--in", plot_inputs, "input CSV paths")->required()->expected(1, -1);
    plot_cmd->add_option("--metric", plot_metric, "rmse or return");
    plot_cmd->add_option("--out", plot_out, "output SVG path")->required();

    std::string hm_env = "plinko", hm_out;
    int hm_episodes = 2, hm_state = -1;
    std::uint64_t hm_seed = 0;
    CLI::App* hm_cmd = app.add_subcommand(
        "heatmap", "train td-pr briefly and export a credit-vector heatmap");
    hm_cmd->add_option("--env", hm_env, "plinko or chain:N (square state count)");
    hm_cmd->add_option("--episodes", hm_episodes, "training episodes");
    hm_cmd->add_option("--seed", hm_seed, "rng seed");
    hm_cmd->add_option("--state", hm_state, "credit column (default: last visited state)");
    hm_cmd->add_option("--out", hm_out, "output SVG path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*run_cmd || *sweep_cmd) {
            if (*sweep_cmd) {
                ExperimentConfig file_cfg = load_config_file(config_path);
                // CLI flags win over the file: replay only flags the user set.
                for (const auto& [flag, key] :
                     std::initializer_list<std::pair<const char*, const char*>>{
                         {"--env", "env"}, {"--algo", "algo"}, {"--alpha-v", "alpha_v"},
                         {"--alpha-m", "alpha_m"}, {"--gamma", "gamma"},
                         {"--lambda", "lambda"}, {"--eta", "eta"},
                         {"--episodes", "episodes"}, {"--eval-every", "eval_every"},
                         {"--jobs", "jobs"}, {"--out", "out"}}) {
                    const CLI::Option* opt = sweep_cmd->get_option(flag);
                    if (opt->count() > 0) apply_config_key(file_cfg, key, opt->as<std::string>());
                }
                if (has_seeds) file_cfg.seeds = parse_seeds(seeds_spec);
                cfg = file_cfg;
            } else if (has_seeds) {
                cfg.seeds = parse_seeds(seeds_spec);
            }
            cfg.validate();
            if (cfg.out.empty()) throw std::invalid_argument("missing output path");
            RunResult rows = *sweep_cmd ? sweep(cfg, axis, parse_value_list(values_spec))
                                        : run_experiment(cfg);
            write_csv(rows, cfg.out);
            return divergence_exit(rows);
        }
        if (*oracle_cmd) {
            export_oracle(oracle_env, oracle_what, oracle_kappa, oracle_out);
            return 0;
        }
        if (*plot_cmd) {
            RunResult rows;
            for (const std::string& in : plot_inputs) {
                RunResult r = read_csv(in);
                rows.insert(rows.end(), r.begin(), r.end());
            }
            emit_learning_curves(rows, plot_metric, plot_out);
            return 0;
        }
        if (*hm_cmd) {
            const TabularMdp mdp = make_env(hm_env);
            LearnerConfig lc;
            TdPrState state = make_td_pr(mdp, lc);
            RngStream rng = make_rng(hm_seed);
            StateId last = -1;
            for (int k = 0; k < hm_episodes; ++k) {
                const Episode ep = generate_episode(mdp, rng);
                td_pr_episode(state, ep);
                last = ep.steps.empty() ? ep.initial : ep.steps.back().to;
            }
            const StateId col = hm_state >= 0 ? hm_state : last;
            if (col < 0 || col >= mdp.n_states)
                throw std::invalid_argument("heatmap state out of range");
            export_heatmap(credit_vector(state, col), hm_out);
            return 0;
        }
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 1;
}

}  // namespace harness
}  // namespace predrl
