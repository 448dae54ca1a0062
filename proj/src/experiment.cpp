#include "spdnn/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <tuple>

#include "spdnn/csv.hpp"
#include "spdnn/errors.hpp"
#include "spdnn/penalty.hpp"

namespace spdnn {

BatchPredictor network_predictor(const Network& net) {
    return [&net](const InputMatrix& x) { return net.forward_batch(x); };
}

BatchPredictor oracle_predictor(const DgpSpec& dgp) {
    return [dgp](const InputMatrix& x) {
        if (x.cols() != 3) throw ShapeError("oracle predictor expects (y1, y2, x) rows");
        Eigen::VectorXd out(x.rows());
        for (Eigen::Index i = 0; i < x.rows(); ++i) out[i] = target_f(dgp, x(i, 0), x(i, 1), x(i, 2));
        return out;
    };
}

ExcessRisk excess_risk_on(const BatchPredictor& h, const DgpSpec& dgp, const SupervisedSet& test,
                          const Loss& loss) {
    if (test.empty()) throw ArgumentError("excess risk needs at least one test pair");
    if (test.dim() != 3) throw ShapeError("excess risk expects inputs (y1, y2, x)");
    const Eigen::VectorXd pred = h(test.inputs);
    const Eigen::VectorXd best = oracle_predictor(dgp)(test.inputs);
    if (pred.size() != test.inputs.rows()) throw ShapeError("predictor returned the wrong number of values");
    const Eigen::Index m = pred.size();
    Eigen::ArrayXd diff(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        diff[i] = loss.eval(pred[i], test.targets[i]) - loss.eval(best[i], test.targets[i]);
    }
    ExcessRisk r;
    r.m = static_cast<std::size_t>(m);
    r.value = diff.mean();
    if (m > 1) {
        const double var = (diff - r.value).square().sum() / static_cast<double>(m - 1);
        r.std_error = std::sqrt(var / static_cast<double>(m));
    }
    return r;
}

ExcessRisk excess_risk(const BatchPredictor& h, const DgpSpec& dgp, std::size_t m, const Loss& loss, Rng& rng) {
    if (m == 0) throw ArgumentError("excess risk needs m >= 1");
    const SupervisedSet test = make_supervised(simulate_arx_arch(dgp, m + 2, rng));
    return excess_risk_on(h, dgp, test, loss);
}

ExcessRisk excess_risk(const Network& net, const DgpSpec& dgp, std::size_t m, const Loss& loss, Rng& rng) {
    if (net.architecture().input_dim() != 3) throw ShapeError("excess risk expects a network with input dimension 3");
    return excess_risk(network_predictor(net), dgp, m, loss, rng);
}

void ExperimentSpec::validate() const {
    dgp.validate();
    arch.validate();
    train.validate();
    if (arch.input_dim() != 3) throw ConfigError("experiment architecture must take 3 inputs (y1, y2, x)");
    if (sizes.empty()) throw ConfigError("experiment needs at least one sample size");
    if (!std::is_sorted(sizes.begin(), sizes.end())) throw ConfigError("experiment sizes must be sorted ascending");
    if (sizes.front() < 2) throw ConfigError("experiment sample sizes must be >= 2");
    if (replications == 0) throw ConfigError("replications must be positive");
    if (test_size == 0) throw ConfigError("test size must be positive");
    if (losses.empty()) throw ConfigError("experiment needs at least one loss");
    if (threads == 0) throw ConfigError("threads must be positive");
}

bool operator<(const ResultRow& a, const ResultRow& b) {
    return std::tie(a.dgp, a.n, a.rep, a.estimator, a.loss) < std::tie(b.dgp, b.n, b.rep, b.estimator, b.loss);
}

RngSeed replication_seed(RngSeed master, const std::string& dgp, std::size_t n, std::size_t rep) {
    return derive_seed(master, {label_hash(dgp), n, rep});
}

namespace {

Loss make_loss(Loss::Kind kind) {
    switch (kind) {
        case Loss::Kind::L1: return Loss::l1();
        case Loss::Kind::L2: return Loss::l2();
        case Loss::Kind::Custom: break;
    }
    throw ConfigError("experiments support the l1 and l2 losses only");
}

ResultRow make_row(const std::string& dgp, std::size_t n, std::size_t rep, const char* estimator,
                   const Loss& loss) {
    ResultRow row;
    row.dgp = dgp;
    row.n = n;
    row.rep = rep;
    row.estimator = estimator;
    row.loss = loss.name();
    row.excess_risk = std::nan("");
    row.status = "failed";
    return row;
}

void fill(ResultRow& row, const ExcessRisk& er, const Network& net) {
    row.excess_risk = er.value;
    row.l0 = l0_norm(net.params());
    row.status = er.negative() ? "negative" : "ok";
}

}  // namespace

std::vector<ResultRow> run_replication(const ExperimentSpec& spec, std::size_t n, std::size_t rep) {
    const std::string name = spec.dgp.name();
    const RngSeed seed = replication_seed(spec.master_seed, name, n, rep);

    std::vector<ResultRow> rows;
    std::vector<Loss> losses;
    for (Loss::Kind kind : spec.losses) {
        losses.push_back(make_loss(kind));
        rows.push_back(make_row(name, n, rep, "spdnn", losses.back()));
        rows.push_back(make_row(name, n, rep, "npdnn", losses.back()));
    }

    SupervisedSet train, valid, test;
    try {
        // n + 2 observations give n lagged pairs.
        train = make_supervised(simulate_arx_arch(spec.dgp, n + 2, derive_seed(seed, {1})));
        valid = make_supervised(simulate_arx_arch(spec.dgp, n + 2, derive_seed(seed, {2})));
        test = make_supervised(simulate_arx_arch(spec.dgp, spec.test_size + 2, derive_seed(seed, {3})));
    } catch (const Error&) {
        return rows;
    }

    for (std::size_t k = 0; k < losses.size(); ++k) {
        const Loss& loss = losses[k];
        const TuningGrid grid = TuningGrid::make(static_cast<double>(n), spec.lambda_exponents, spec.tau_exponents,
                                                 criterion_for(loss));
        ResultRow& sp = rows[2 * k];
        ResultRow& np = rows[2 * k + 1];
        try {
            TrainConfig cfg = spec.train;
            cfg.seed = derive_seed(seed, {10, k});
            const TuningResult tuned = tune_grid(train, valid, grid, spec.arch, loss, cfg, spec.activation);
            sp.lambda = tuned.best_lambda;
            sp.tau = tuned.best_tau;
            fill(sp, excess_risk_on(network_predictor(tuned.best_model.network), spec.dgp, test, loss),
                 tuned.best_model.network);
        } catch (const Error&) {
        }
        try {
            TrainConfig cfg = spec.train;
            cfg.seed = derive_seed(seed, {20, k});
            const TrainedModel model = train_npdnn(train, spec.arch, loss, cfg, spec.activation);
            fill(np, excess_risk_on(network_predictor(model.network), spec.dgp, test, loss), model.network);
        } catch (const Error&) {
        }
    }
    return rows;
}

std::vector<ResultRow> run_replications(const ExperimentSpec& spec, const ProgressFn& progress) {
    spec.validate();
    std::vector<std::pair<std::size_t, std::size_t>> cells;
    for (std::size_t n : spec.sizes) {
        for (std::size_t rep = 0; rep < spec.replications; ++rep) cells.emplace_back(n, rep);
    }
    std::vector<std::vector<ResultRow>> out(cells.size());
    std::atomic<std::size_t> next{0};
    std::size_t done = 0;
    std::mutex progress_mutex;

    auto worker = [&] {
        for (std::size_t c = next++; c < cells.size(); c = next++) {
            out[c] = run_replication(spec, cells[c].first, cells[c].second);
            if (progress) {
                std::lock_guard<std::mutex> lock(progress_mutex);
                progress(++done, cells.size());
            }
        }
    };
    const std::size_t workers = std::min(spec.threads, cells.size());
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }

    std::vector<ResultRow> rows;
    for (auto& cell : out) rows.insert(rows.end(), cell.begin(), cell.end());
    std::sort(rows.begin(), rows.end());
    return rows;
}

void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << "dgp,n,rep,estimator,loss,excess_risk,lambda,tau,l0,status\n";
    for (const ResultRow& r : rows) {
        out << r.dgp << ',' << r.n << ',' << r.rep << ',' << r.estimator << ',' << r.loss << ','
            << format_double(r.excess_risk) << ',' << format_double(r.lambda) << ','
            << (r.tau ? format_double(*r.tau) : "") << ',' << r.l0 << ',' << r.status << '\n';
    }
}

namespace {

std::size_t parse_count(const std::string& field, long line) {
    double v = 0.0;
    if (!parse_double(field, v) || v < 0.0 || v != std::floor(v)) {
        throw IngestionError("expected a nonnegative integer, got '" + field + "'", line);
    }
    return static_cast<std::size_t>(v);
}

double parse_real(const std::string& field, long line) {
    double v = 0.0;
    if (!parse_double(field, v)) throw IngestionError("expected a number, got '" + field + "'", line);
    return v;
}

}  // namespace

std::vector<ResultRow> read_results_csv(std::istream& in) {
    std::vector<ResultRow> rows;
    std::string line;
    long line_no = 0;
    bool header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (!header) {
            if (f.size() != 10 || f[0] != "dgp" || f[9] != "status") {
                throw IngestionError("not a results CSV header", line_no);
            }
            header = true;
            continue;
        }
        if (f.size() != 10) throw IngestionError("expected 10 fields", line_no);
        ResultRow r;
        r.dgp = f[0];
        r.n = parse_count(f[1], line_no);
        r.rep = parse_count(f[2], line_no);
        r.estimator = f[3];
        r.loss = f[4];
        r.excess_risk = parse_real(f[5], line_no);
        r.lambda = parse_real(f[6], line_no);
        if (!f[7].empty()) r.tau = parse_real(f[7], line_no);
        r.l0 = parse_count(f[8], line_no);
        r.status = f[9];
        rows.push_back(std::move(r));
    }
    if (!header) throw IngestionError("results CSV has no header", -1);
    return rows;
}

double median(std::vector<double> values) {
    if (values.empty()) throw ArgumentError("median of an empty sample");
    std::sort(values.begin(), values.end());
    const std::size_t k = values.size() / 2;
    return values.size() % 2 == 1 ? values[k] : 0.5 * (values[k - 1] + values[k]);
}

std::vector<ResultSummary> summarize(const std::vector<ResultRow>& rows) {
    using Key = std::tuple<std::string, std::size_t, std::string, std::string>;
    std::map<Key, std::vector<double>> values;
    std::map<Key, std::size_t> failed;
    for (const ResultRow& r : rows) {
        const Key key{r.dgp, r.n, r.estimator, r.loss};
        if (r.status == "failed" || !std::isfinite(r.excess_risk)) {
            ++failed[key];
            values[key];
        } else {
            values[key].push_back(r.excess_risk);
        }
    }
    std::vector<ResultSummary> out;
    for (const auto& [key, v] : values) {
        ResultSummary s;
        std::tie(s.dgp, s.n, s.estimator, s.loss) = key;
        s.count = v.size();
        s.failed = failed.count(key) ? failed.at(key) : 0;
        if (!v.empty()) {
            s.median = median(v);
            double sum = 0.0;
            for (double x : v) sum += x;
            s.mean = sum / static_cast<double>(v.size());
        } else {
            s.median = s.mean = std::nan("");
        }
        out.push_back(s);
    }
    return out;
}

void write_summary_csv(std::ostream& out, const std::vector<ResultSummary>& summary) {
    out << "dgp,n,estimator,loss,count,failed,median,mean\n";
    for (const ResultSummary& s : summary) {
        out << s.dgp << ',' << s.n << ',' << s.estimator << ',' << s.loss << ',' << s.count << ',' << s.failed << ','
            << format_double(s.median) << ',' << format_double(s.mean) << '\n';
    }
}

}  // namespace spdnn
