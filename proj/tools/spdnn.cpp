// Command-line front end: simulate, train, tune, experiment, pm10, bounds.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "spdnn/bounds.hpp"
#include "spdnn/csv.hpp"
#include "spdnn/dgp.hpp"
#include "spdnn/errors.hpp"
#include "spdnn/experiment.hpp"
#include "spdnn/network.hpp"
#include "spdnn/pm10.hpp"
#include "spdnn/train.hpp"
#include "spdnn/tuning.hpp"

namespace fs = std::filesystem;
using namespace spdnn;

namespace {

struct Globals {
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string config;
    std::size_t threads = 1;
};

struct DgpOpts {
    std::string dgp = "dgp1";
    double phi0 = 0.25;
    double phi1 = 0.1;
    double alpha0 = 0.5;
    double alpha1 = 0.5;
    double halfwidth = 2.0;
    std::size_t burn_in = 1000;
    std::string innovations = "standardized";

    DgpSpec spec(const std::string& name) const {
        DgpSpec s = name == "dgp2" ? DgpSpec::dgp2() : DgpSpec::dgp1();
        s.kind = parse_dgp(name);
        s.phi0 = phi0;
        s.phi1 = phi1;
        s.alpha0 = alpha0;
        s.alpha1 = alpha1;
        s.innovation_halfwidth = halfwidth;
        s.burn_in = burn_in;
        s.innovations = innovations == "raw" ? InnovationMode::Raw : InnovationMode::Standardized;
        s.validate();
        return s;
    }
    DgpSpec spec() const { return spec(dgp); }
};

void add_dgp_options(CLI::App* sub, DgpOpts& o, bool allow_both = false) {
    std::vector<std::string> names{"dgp1", "dgp2"};
    if (allow_both) names.push_back("both");
    sub->add_option("--dgp", o.dgp, "Data-generating process")->check(CLI::IsMember(names))->capture_default_str();
    sub->add_option("--phi0", o.phi0, "ARCH intercept")->capture_default_str();
    sub->add_option("--phi1", o.phi1, "ARCH slope")->capture_default_str();
    sub->add_option("--alpha0", o.alpha0, "Covariate AR(1) intercept")->capture_default_str();
    sub->add_option("--alpha1", o.alpha1, "Covariate AR(1) slope")->capture_default_str();
    sub->add_option("--halfwidth", o.halfwidth, "Half-width a of the uniform innovations")->capture_default_str();
    sub->add_option("--burn-in", o.burn_in, "Discarded initial steps")->capture_default_str();
    sub->add_option("--innovations", o.innovations, "standardized or raw uniform innovations")
        ->check(CLI::IsMember({"standardized", "raw"}))
        ->capture_default_str();
}

struct NetOpts {
    TrainConfig cfg;
    int hidden_layers = 2;
    int width = 100;
    double output_bound = 1e3;
    std::string activation = "relu";

    Architecture arch(int input_dim) const { return Architecture::mlp(input_dim, hidden_layers, width, 1e3, output_bound); }
    Activation act() const { return parse_activation(activation); }
};

void add_net_options(CLI::App* sub, NetOpts& o) {
    sub->add_option("--hidden-layers", o.hidden_layers, "Number of hidden layers")->capture_default_str();
    sub->add_option("--width", o.width, "Units per hidden layer")->capture_default_str();
    sub->add_option("--output-bound", o.output_bound, "Output clamp F")->capture_default_str();
    sub->add_option("--activation", o.activation, "relu, sigmoid or tanh")
        ->check(CLI::IsMember({"relu", "sigmoid", "tanh"}))
        ->capture_default_str();
    sub->add_option("--lr", o.cfg.learning_rate, "Adam learning rate")->capture_default_str();
    sub->add_option("--batch-size", o.cfg.batch_size, "Minibatch size")->capture_default_str();
    sub->add_option("--patience", o.cfg.patience, "Early-stopping patience in epochs")->capture_default_str();
    sub->add_option("--max-epochs", o.cfg.max_epochs, "Epoch cap")->capture_default_str();
}

struct GridOpts {
    bool full = false;
    std::vector<int> lambda_exps;
    std::vector<int> tau_exps;

    std::vector<int> lambdas() const {
        if (!lambda_exps.empty()) return lambda_exps;
        return full ? TuningGrid::full_exponents() : TuningGrid::thinned_exponents();
    }
    std::vector<int> taus() const {
        if (!tau_exps.empty()) return tau_exps;
        return full ? TuningGrid::full_exponents() : TuningGrid::thinned_exponents();
    }
};

void add_grid_options(CLI::App* sub, GridOpts& o) {
    sub->add_flag("--full", o.full, "Use the full 11 x 11 grid (i, j = 0..10)");
    sub->add_option("--lambda-exps", o.lambda_exps, "Explicit lambda exponents i (comma separated)")->delimiter(',');
    sub->add_option("--tau-exps", o.tau_exps, "Explicit tau exponents j (comma separated)")->delimiter(',');
}

fs::path out_dir(const Globals& g) {
    fs::path p(g.out);
    fs::create_directories(p);
    return p;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    return f;
}

// Flat "key = value" config. Keys name long flags without the leading dashes.
// Values are spliced into argv ahead of the explicit arguments, so flags given
// on the command line win.
std::vector<std::string> expand_config(CLI::App& app, const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw CLI::FileError::Missing(path);

    std::size_t sub_pos = args.size();
    CLI::App* sub = nullptr;
    for (std::size_t i = 1; i < args.size() && !sub; ++i) {
        for (CLI::App* s : app.get_subcommands({})) {
            if (s->get_name() == args[i]) {
                sub = s;
                sub_pos = i;
                break;
            }
        }
    }

    std::vector<std::string> global_args, sub_args;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw CLI::ConversionError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        while (!key.empty() && key[0] == '-') key.erase(0, 1);
        const std::string flag = "--" + key;
        const std::string token = flag + "=" + value;
        if (key == "config") continue;
        if (app.get_option_no_throw(flag) != nullptr) {
            global_args.push_back(token);
        } else if (sub != nullptr && sub->get_option_no_throw(flag) != nullptr) {
            sub_args.push_back(token);
        } else {
            bool known = false;
            for (CLI::App* s : app.get_subcommands({})) known = known || s->get_option_no_throw(flag) != nullptr;
            if (!known) throw CLI::ExtrasError("config key '" + key + "' matches no option", CLI::ExitCodes::ExtrasError);
        }
    }

    std::vector<std::string> out{args[0]};
    out.insert(out.end(), global_args.begin(), global_args.end());
    for (std::size_t i = 1; i < args.size(); ++i) {
        out.push_back(args[i]);
        if (i == sub_pos) out.insert(out.end(), sub_args.begin(), sub_args.end());
    }
    return out;
}

// ---- simulate --------------------------------------------------------------

struct SimulateCmd {
    DgpOpts dgp;
    std::size_t n = 1000;
    std::string file = "trajectory.csv";

    void setup(CLI::App* sub) {
        add_dgp_options(sub, dgp);
        sub->add_option("--n", n, "Trajectory length after burn-in")->capture_default_str();
        sub->add_option("--file", file, "Output file name inside --out")->capture_default_str();
    }

    int run(const Globals& g) const {
        if (n == 0) throw ConfigError("--n must be positive");
        const Trajectory traj = simulate_arx_arch(dgp.spec(), n, g.seed);
        const fs::path path = out_dir(g) / file;
        std::ofstream f = open_out(path);
        write_trajectory_csv(f, traj);
        std::cout << "wrote " << path.string() << " (" << n << " steps, " << dgp.dgp << ", seed " << g.seed << ")\n";
        return 0;
    }
};

// ---- train -----------------------------------------------------------------

struct TrainCmd {
    DgpOpts dgp;
    NetOpts net;
    std::size_t n = 1000;
    std::string loss = "l2";
    std::string estimator = "spdnn";
    double lambda = 0.0;
    double tau = 1.0;
    std::string input;

    void setup(CLI::App* sub) {
        add_dgp_options(sub, dgp);
        add_net_options(sub, net);
        sub->add_option("--n", n, "Number of training pairs when simulating")->capture_default_str();
        sub->add_option("--loss", loss, "l1 or l2")->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
        sub->add_option("--estimator", estimator, "spdnn or npdnn")
            ->check(CLI::IsMember({"spdnn", "npdnn"}))
            ->capture_default_str();
        sub->add_option("--lambda", lambda, "Penalty weight")->capture_default_str();
        sub->add_option("--tau", tau, "Clipping threshold")->capture_default_str();
        sub->add_option("--input", input, "Trajectory CSV (t,y,x) to train on instead of simulating");
    }

    int run(const Globals& g) const {
        Trajectory traj;
        if (!input.empty()) {
            std::ifstream f(input);
            if (!f) throw IngestionError("cannot open '" + input + "'", -1);
            traj = read_trajectory_csv(f);
        } else {
            traj = simulate_arx_arch(dgp.spec(), n + 2, derive_seed(g.seed, {1}));
        }
        const SupervisedSet data = make_supervised(traj);
        TrainConfig cfg = net.cfg;
        cfg.seed = derive_seed(g.seed, {2});
        const Loss l = Loss::parse(loss);
        const bool npdnn = estimator == "npdnn";
        const TrainedModel model =
            npdnn ? train_npdnn(data, net.arch(3), l, cfg, net.act())
                  : train_spdnn(data, net.arch(3), PenaltyConfig{lambda, tau}, l, cfg, net.act());

        const fs::path dir = out_dir(g);
        save_network((dir / "network.txt").string(), model.network);
        std::ofstream log = open_out(dir / "training_log.csv");
        write_training_log(log, model);
        std::cout << "estimator " << estimator << "\nloss " << loss << "\npairs " << data.size() << "\nepochs "
                  << model.stopped_epoch << "\nbest_epoch " << model.best_epoch << "\nbest_objective "
                  << format_double(model.best_objective) << "\nl0 " << l0_norm(model.network.params()) << "\nwrote "
                  << (dir / "network.txt").string() << " and " << (dir / "training_log.csv").string() << '\n';
        return 0;
    }
};

// ---- tune ------------------------------------------------------------------

struct TuneCmd {
    DgpOpts dgp;
    NetOpts net;
    GridOpts grid;
    std::size_t n = 1000;
    std::string loss = "l2";

    void setup(CLI::App* sub) {
        add_dgp_options(sub, dgp);
        add_net_options(sub, net);
        add_grid_options(sub, grid);
        sub->add_option("--n", n, "Training and validation pairs")->capture_default_str();
        sub->add_option("--loss", loss, "l1 or l2")->check(CLI::IsMember({"l1", "l2"}))->capture_default_str();
    }

    int run(const Globals& g) const {
        const DgpSpec spec = dgp.spec();
        const SupervisedSet train = make_supervised(simulate_arx_arch(spec, n + 2, derive_seed(g.seed, {1})));
        const SupervisedSet valid = make_supervised(simulate_arx_arch(spec, n + 2, derive_seed(g.seed, {2})));
        const Loss l = Loss::parse(loss);
        const TuningGrid tg = TuningGrid::make(static_cast<double>(n), grid.lambdas(), grid.taus(), criterion_for(l));
        TrainConfig cfg = net.cfg;
        cfg.seed = derive_seed(g.seed, {3});
        const TuningResult r = tune_grid(train, valid, tg, net.arch(3), l, cfg, net.act());

        const fs::path dir = out_dir(g);
        std::ofstream scores = open_out(dir / "scores.csv");
        write_score_table(scores, r, tg);
        save_network((dir / "network.txt").string(), r.best_model.network);
        const TuningCell& b = r.best();
        std::cout << "cells " << r.table.size() << "\nbest_i " << tg.lambda_exponents[b.lambda_index] << "\nbest_j "
                  << tg.tau_exponents[b.tau_index] << "\nlambda " << format_double(b.lambda) << "\ntau "
                  << format_double(b.tau) << '\n'
                  << to_string(tg.criterion) << ' ' << format_double(b.score) << "\nwrote "
                  << (dir / "scores.csv").string() << '\n';
        return 0;
    }
};

// ---- experiment ------------------------------------------------------------

struct ExperimentCmd {
    DgpOpts dgp;
    NetOpts net;
    GridOpts grid;
    std::vector<std::size_t> sizes{250, 500, 1000};
    std::size_t reps = 20;
    std::size_t test_size = 10000;
    std::vector<std::string> losses{"l1", "l2"};
    bool quiet = false;

    void setup(CLI::App* sub) {
        add_dgp_options(sub, dgp, true);
        add_net_options(sub, net);
        add_grid_options(sub, grid);
        sub->add_option("--sizes", sizes, "Training sizes (comma separated, ascending)")
            ->delimiter(',')
            ->capture_default_str();
        sub->add_option("--reps", reps, "Replications per size")->capture_default_str();
        sub->add_option("--test-size", test_size, "Test pairs m for the excess risk")->capture_default_str();
        sub->add_option("--losses", losses, "Losses (comma separated)")
            ->delimiter(',')
            ->check(CLI::IsMember({"l1", "l2"}))
            ->capture_default_str();
        sub->add_flag("--quiet", quiet, "No progress output");
    }

    int run(const Globals& g) const {
        std::vector<std::string> names;
        if (dgp.dgp == "both") {
            names = {"dgp1", "dgp2"};
        } else {
            names = {dgp.dgp};
        }
        std::vector<ResultRow> rows;
        for (const std::string& name : names) {
            ExperimentSpec spec;
            spec.dgp = dgp.spec(name);
            spec.sizes = sizes;
            spec.replications = reps;
            spec.test_size = test_size;
            spec.losses.clear();
            for (const std::string& l : losses) spec.losses.push_back(Loss::parse(l).kind());
            spec.arch = net.arch(3);
            spec.activation = net.act();
            spec.train = net.cfg;
            spec.lambda_exponents = grid.lambdas();
            spec.tau_exponents = grid.taus();
            spec.master_seed = g.seed;
            spec.threads = g.threads;
            ProgressFn progress;
            if (!quiet) {
                progress = [&name](std::size_t done, std::size_t total) {
                    std::cerr << name << ": " << done << '/' << total << " replications done\n";
                };
            }
            const std::vector<ResultRow> part = run_replications(spec, progress);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        std::sort(rows.begin(), rows.end());

        const fs::path dir = out_dir(g);
        std::ofstream res = open_out(dir / "results.csv");
        write_results_csv(res, rows);
        const std::vector<ResultSummary> summary = summarize(rows);
        std::ofstream sum = open_out(dir / "summary.csv");
        write_summary_csv(sum, summary);
        write_summary_csv(std::cout, summary);
        std::cout << "wrote " << (dir / "results.csv").string() << " (" << rows.size() << " rows)\n";
        return 0;
    }
};

// ---- pm10 ------------------------------------------------------------------

struct Pm10Cmd {
    NetOpts net;
    GridOpts grid;
    std::string input;
    std::size_t synthetic_rows = 408;
    std::size_t test_size = 100;
    double tune_fraction = 0.25;
    bool raw = false;

    void setup(CLI::App* sub) {
        add_net_options(sub, net);
        add_grid_options(sub, grid);
        sub->add_option("--input", input, "CSV with columns date,pm10,rh");
        sub->add_option("--synthetic-rows", synthetic_rows, "Rows of the synthetic series used without --input")
            ->capture_default_str();
        sub->add_option("--test-size", test_size, "Final steps held out for testing")->capture_default_str();
        sub->add_option("--tune-fraction", tune_fraction, "Tail of the training window used for tuning")
            ->capture_default_str();
        sub->add_flag("--no-standardize", raw, "Train on raw rather than standardized values");
    }

    int run(const Globals& g) const {
        const fs::path dir = out_dir(g);
        Pm10Series series;
        if (!input.empty()) {
            series = read_pm10_csv(input);
        } else {
            series = synthetic_pm10(synthetic_rows, g.seed);
            std::ofstream f = open_out(dir / "pm10_synthetic.csv");
            write_pm10_csv(f, series);
            std::cout << "# no --input given: using a synthetic series driven by the DAR mean equation\n";
        }
        Pm10Config cfg;
        cfg.arch = net.arch(2);
        cfg.train = net.cfg;
        cfg.lambda_exponents = grid.lambdas();
        cfg.tau_exponents = grid.taus();
        cfg.test_size = test_size;
        cfg.tune_fraction = tune_fraction;
        cfg.standardize = !raw;
        cfg.seed = g.seed;
        const Pm10Result r = pm10_pipeline(series, cfg);

        std::ofstream pred = open_out(dir / "predictions.csv");
        write_predictions_csv(pred, r);
        std::ofstream met = open_out(dir / "metrics.csv");
        write_metrics_csv(met, r);
        write_metrics_csv(std::cout, r);
        std::cout << "# training pairs " << r.train_rows << ", test steps " << cfg.test_size << ", lambda "
                  << format_double(r.lambda) << ", tau " << format_double(r.tau) << '\n'
                  << "# DAR is scored on the same final test window as the networks\n"
                  << "wrote " << (dir / "predictions.csv").string() << '\n';
        return 0;
    }
};

// ---- bounds ----------------------------------------------------------------

struct BoundsCmd {
    BoundInputs in;
    DependenceParams dep;
    ScheduleParams sched;
    ScheduleArch sarch;
    std::string regime = "thm4";
    std::string psi = "theta";
    double C1n = 0.0;
    double C2n = 0.0;
    double smoothness = 0.0;
    double dim = 3.0;
    bool json = false;

    void setup(CLI::App* sub) {
        sub->add_option("--n", in.n, "Sample size")->capture_default_str();
        sub->add_option("--eta", in.eta, "Confidence level")->capture_default_str();
        sub->add_option("--nu0", in.nu0, "Concentration exponent")->capture_default_str();
        sub->add_option("--M", in.M, "Loss bound")->capture_default_str();
        sub->add_option("--theta-inf", in.theta_inf, "Bound on the theta_inf dependence coefficient")
            ->capture_default_str();
        sub->add_option("--G", in.G, "Loss class Lipschitz constant")->capture_default_str();
        sub->add_option("--C-sigma", in.C_sigma, "Activation Lipschitz constant")->capture_default_str();
        sub->add_option("--L", in.L, "Depth")->capture_default_str();
        sub->add_option("--N", in.N, "Width")->capture_default_str();
        sub->add_option("--B", in.B, "Weight bound")->capture_default_str();
        sub->add_option("--S", in.S, "Sparsity")->capture_default_str();
        sub->add_option("--regime", regime, "thm3 or thm4")->check(CLI::IsMember({"thm3", "thm4"}))->capture_default_str();
        sub->add_option("--psi", psi, "theta, eta, kappa or lambda")
            ->check(CLI::IsMember({"theta", "eta", "kappa", "lambda"}))
            ->capture_default_str();
        sub->add_option("--L1", dep.L1, "Dependence constant L1")->capture_default_str();
        sub->add_option("--L2", dep.L2, "Dependence constant L2")->capture_default_str();
        sub->add_option("--mu", dep.mu, "Dependence exponent mu")->capture_default_str();
        sub->add_option("--nu1", sched.nu1)->capture_default_str();
        sub->add_option("--nu2", sched.nu2)->capture_default_str();
        sub->add_option("--nu3", sched.nu3)->capture_default_str();
        sub->add_option("--nu4", sched.nu4)->capture_default_str();
        sub->add_option("--nu5", sched.nu5)->capture_default_str();
        sub->add_option("--nu6", sched.nu6)->capture_default_str();
        sub->add_option("--K", sched.K_ell, "Loss Lipschitz constant K")->capture_default_str();
        sub->add_option("--C1n", C1n, "Override C1n (default: from psi, L1 and M)");
        sub->add_option("--C2n", C2n, "Override C2n (default: from psi, L2, mu and M)");
        sub->add_option("--lambda-multiplier", sched.lambda_multiplier, "Constant in front of lambda_n")
            ->capture_default_str();
        sub->add_option("--sched-L", sarch.L, "Depth L_n in tau_n")->capture_default_str();
        sub->add_option("--sched-N", sarch.N, "Width N_n in tau_n")->capture_default_str();
        sub->add_option("--sched-B", sarch.B, "Weight bound B_n in tau_n")->capture_default_str();
        sub->add_option("--s", smoothness, "Hoelder smoothness (0 skips the rate)");
        sub->add_option("--d", dim, "Input dimension for the Hoelder rate")->capture_default_str();
        sub->add_flag("--json", json, "Emit a flat JSON object");
    }

    int run(const Globals&) {
        in.validate();
        dep.psi = parse_psi(psi);
        std::vector<std::pair<std::string, nlohmann::json>> rows;
        auto add = [&rows](const std::string& k, nlohmann::json v) { rows.emplace_back(k, std::move(v)); };

        add("n", in.n);
        add("C1", covering_constant(in));
        const SampleSizeThreshold st = stated_threshold(in);
        const SampleSizeThreshold ct = corrected_threshold(in);
        add("stated_n0", st.n0);
        add("stated_n_min", st.n_min);
        add("stated_satisfied", st.satisfied);
        add("corrected_n0", ct.n0);
        add("corrected_n_min", ct.n_min);
        add("corrected_satisfied", ct.satisfied);
        add("eps_prime", generalization_epsilon_prime(in));
        add("stated_cap", 2.0 * in.M / std::pow(in.n, in.nu0 / 2.0));
        try {
            const GeneralizationBound gb = generalization_epsilon(in);
            add("eps1", gb.eps1);
            add("phi_residual", gb.phi_residual);
            add("eps1_status", "ok");
        } catch (const BelowThresholdError&) {
            add("eps1_status", "below_threshold");
        } catch (const RootBracketError&) {
            add("eps1_status", "no_root");
        }

        const DependenceConstants c = dependence_constants(dep, in.M);
        sched.C1n = C1n > 0.0 ? C1n : c.C1n;
        sched.C2n = C2n > 0.0 ? C2n : c.C2n;
        const Regime reg = parse_regime(regime);
        add("regime", regime);
        add("psi", psi);
        add("psi_at_one", psi_at_one(dep.psi));
        add("C1n", sched.C1n);
        add("C2n", sched.C2n);
        add("rate_exponent", reg == Regime::Dependent ? (dep.mu + 1.0) / (2.0 * dep.mu + 3.0) : 2.0 * sched.nu6);
        const Schedule s = schedule(reg, sched, dep, sarch, in.n);
        add("lambda_n", s.lambda);
        add("rho_n", s.rho);
        add("tau_n_max", s.tau_max);
        if (smoothness > 0.0) {
            const HolderRate h = holder_rate(smoothness, dim, sched.nu3, sched.nu4, sched.nu6);
            add("holder_mean_exponent", h.mean_exponent);
            add("holder_penalty_exponent", h.penalty_exponent);
            add("holder_exponent", h.exponent);
            add("holder_nu1", h.nu1);
            add("holder_nu2", h.nu2);
            add("holder_rate", h.rate);
        }

        if (json) {
            nlohmann::ordered_json doc;
            for (auto& [k, v] : rows) doc[k] = v;
            std::cout << doc.dump(2) << '\n';
        } else {
            for (auto& [k, v] : rows) {
                std::cout << k << ' ';
                if (v.is_number_float()) {
                    std::cout << format_double(v.get<double>());
                } else if (v.is_string()) {
                    std::cout << v.get<std::string>();
                } else {
                    std::cout << v.dump();
                }
                std::cout << '\n';
            }
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse-penalized deep neural network estimators for weakly dependent time series"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();

    Globals g;
    app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
    app.add_option("--out", g.out, "Output directory")->capture_default_str();
    app.add_option("--config", g.config, "Flat key = value file; keys are flag names");
    app.add_option("--threads", g.threads, "Worker threads for experiment")->check(CLI::PositiveNumber)->capture_default_str();

    SimulateCmd simulate;
    TrainCmd train;
    TuneCmd tune;
    ExperimentCmd experiment;
    Pm10Cmd pm10;
    BoundsCmd bounds;
    CLI::App* s_sim = app.add_subcommand("simulate", "Write a simulated trajectory CSV");
    CLI::App* s_train = app.add_subcommand("train", "Fit one SPDNN or NPDNN");
    CLI::App* s_tune = app.add_subcommand("tune", "Grid-search (lambda, tau) on a validation trajectory");
    CLI::App* s_exp = app.add_subcommand("experiment", "Replicated excess-risk experiment");
    CLI::App* s_pm = app.add_subcommand("pm10", "PM10 forecasting pipeline with the DAR baseline");
    CLI::App* s_bounds = app.add_subcommand("bounds", "Evaluate the theoretical bounds and schedules");
    simulate.setup(s_sim);
    train.setup(s_train);
    tune.setup(s_tune);
    experiment.setup(s_exp);
    pm10.setup(s_pm);
    bounds.setup(s_bounds);

    std::vector<std::string> args(argv, argv + argc);
    try {
        args = expand_config(app, args);
        std::vector<char*> ptrs;
        for (std::string& a : args) ptrs.push_back(a.data());
        app.parse(static_cast<int>(ptrs.size()), ptrs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\nrun with --help for usage\n";
        return 2;
    }

    try {
        if (s_sim->parsed()) return simulate.run(g);
        if (s_train->parsed()) return train.run(g);
        if (s_tune->parsed()) return tune.run(g);
        if (s_exp->parsed()) return experiment.run(g);
        if (s_pm->parsed()) return pm10.run(g);
        if (s_bounds->parsed()) return bounds.run(g);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 2;
}
