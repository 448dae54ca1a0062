#include "spdnn/pm10.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "spdnn/csv.hpp"
#include "spdnn/dgp.hpp"
#include "spdnn/errors.hpp"
#include "spdnn/loss.hpp"

namespace spdnn {

Pm10Series read_pm10_csv(std::istream& in) {
    Pm10Series s;
    std::string line;
    long line_no = 0;
    int col_date = -1, col_pm = -1, col_rh = -1;
    std::size_t width = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (col_date < 0) {
            for (std::size_t k = 0; k < f.size(); ++k) {
                if (f[k] == "date") col_date = static_cast<int>(k);
                if (f[k] == "pm10") col_pm = static_cast<int>(k);
                if (f[k] == "rh") col_rh = static_cast<int>(k);
            }
            if (col_date < 0 || col_pm < 0 || col_rh < 0) {
                throw IngestionError("PM10 CSV header must contain date, pm10 and rh", line_no);
            }
            width = f.size();
            continue;
        }
        if (f.size() != width) {
            throw IngestionError("expected " + std::to_string(width) + " fields, got " + std::to_string(f.size()),
                                 line_no);
        }
        double pm = 0.0, rh = 0.0;
        if (!parse_double(f[col_pm], pm) || !std::isfinite(pm)) {
            throw IngestionError("unparsable pm10 value '" + f[col_pm] + "'", line_no);
        }
        if (!parse_double(f[col_rh], rh) || !std::isfinite(rh)) {
            throw IngestionError("unparsable rh value '" + f[col_rh] + "'", line_no);
        }
        s.dates.push_back(f[col_date]);
        s.pm10.push_back(pm);
        s.rh.push_back(rh);
    }
    if (col_date < 0) throw IngestionError("PM10 CSV is empty", -1);
    return s;
}

Pm10Series read_pm10_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open PM10 CSV '" + path + "'", -1);
    return read_pm10_csv(in);
}

void write_pm10_csv(std::ostream& out, const Pm10Series& series) {
    out << "date,pm10,rh\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        out << series.dates[t] << ',' << format_double(series.pm10[t]) << ',' << format_double(series.rh[t]) << '\n';
    }
}

double dar_predict(double pm_prev, double rh_prev) { return 37.946 + 0.330 * pm_prev - 0.210 * rh_prev; }

namespace {

std::string iso_date(std::chrono::sys_days day) {
    const std::chrono::year_month_day ymd{day};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                  static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return buf;
}

}  // namespace

Pm10Series synthetic_pm10(std::size_t rows, RngSeed seed, double noise_sd) {
    using namespace std::chrono;
    Rng rng(seed);
    Pm10Series s;
    const sys_days start{year{2005} / January / 21};
    double pm = 33.0;
    double rh = 75.0;
    for (std::size_t t = 0; t < rows; ++t) {
        if (t > 0) {
            const double mean = dar_predict(pm, rh);
            const double shock = noise_sd == 0.0
                                     ? 0.0
                                     : noise_sd * std_uniform(2.0, rng) * std::sqrt(32.108 + 0.023 * pm * pm);
            pm = noise_sd == 0.0 ? mean : std::max(mean + shock, 1.0);
            rh = std::clamp(75.0 + 0.6 * (rh - 75.0) + 5.0 * std_uniform(2.0, rng), 0.0, 100.0);
        }
        s.dates.push_back(iso_date(start + days{static_cast<int>(t)}));
        s.pm10.push_back(pm);
        s.rh.push_back(rh);
    }
    return s;
}

double MetricsReport::relative() const {
    if (!mean_rel) throw UndefinedMetricError("mean relative error is undefined: some actual value is <= 0");
    return *mean_rel;
}

MetricsReport prediction_metrics(const std::vector<double>& actuals, const std::vector<double>& preds) {
    if (actuals.size() != preds.size()) throw ArgumentError("prediction_metrics: series lengths differ");
    if (actuals.empty()) throw ArgumentError("prediction_metrics: empty series");
    MetricsReport r;
    double abs_sum = 0.0, rel_sum = 0.0;
    bool rel_defined = true;
    for (std::size_t t = 0; t < actuals.size(); ++t) {
        const double err = std::abs(actuals[t] - preds[t]);
        abs_sum += err;
        if (actuals[t] > 0.0) {
            rel_sum += err / actuals[t];
        } else {
            rel_defined = false;
        }
        r.per_step.emplace_back(actuals[t], preds[t]);
    }
    const double count = static_cast<double>(actuals.size());
    r.mean_abs = abs_sum / count;
    if (rel_defined) r.mean_rel = rel_sum / count;
    return r;
}

SupervisedSet pm10_supervised(const Pm10Series& series) {
    if (series.size() < 2) throw InsufficientDataError("PM10 series needs at least 2 rows");
    SupervisedSet set;
    const auto rows = static_cast<Eigen::Index>(series.size() - 1);
    set.inputs.resize(rows, 2);
    set.targets.resize(rows);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const auto t = static_cast<std::size_t>(r) + 1;
        set.inputs(r, 0) = series.pm10[t - 1];
        set.inputs(r, 1) = series.rh[t - 1];
        set.targets[r] = series.pm10[t];
    }
    return set;
}

namespace {

struct Scaler {
    Eigen::RowVectorXd in_mean, in_sd;
    double out_mean = 0.0, out_sd = 1.0;

    static Scaler fit(const SupervisedSet& d, bool enabled) {
        Scaler s;
        const auto cols = d.inputs.cols();
        s.in_mean = Eigen::RowVectorXd::Zero(cols);
        s.in_sd = Eigen::RowVectorXd::Ones(cols);
        if (!enabled) return s;
        s.in_mean = d.inputs.colwise().mean();
        for (Eigen::Index c = 0; c < cols; ++c) s.in_sd[c] = sd((d.inputs.col(c).array() - s.in_mean[c]).matrix());
        s.out_mean = d.targets.mean();
        s.out_sd = sd((d.targets.array() - s.out_mean).matrix());
        return s;
    }

    static double sd(const Eigen::VectorXd& centered) {
        const double v = centered.size() > 1 ? centered.squaredNorm() / static_cast<double>(centered.size() - 1) : 0.0;
        return v > 0.0 ? std::sqrt(v) : 1.0;
    }

    SupervisedSet apply(const SupervisedSet& d) const {
        SupervisedSet out;
        out.inputs = (d.inputs.rowwise() - in_mean).array().rowwise() / in_sd.array();
        out.targets = (d.targets.array() - out_mean) / out_sd;
        return out;
    }

    std::vector<double> invert(const Eigen::VectorXd& preds) const {
        std::vector<double> out(static_cast<std::size_t>(preds.size()));
        for (Eigen::Index i = 0; i < preds.size(); ++i) out[static_cast<std::size_t>(i)] = preds[i] * out_sd + out_mean;
        return out;
    }
};

}  // namespace

Pm10Result pm10_pipeline(const Pm10Series& series, const Pm10Config& cfg) {
    cfg.arch.validate();
    cfg.train.validate();
    if (cfg.arch.input_dim() != 2) throw ConfigError("PM10 architecture must take 2 inputs (pm10, rh)");
    if (cfg.test_size == 0) throw ConfigError("PM10 test size must be positive");
    if (!(cfg.tune_fraction > 0.0 && cfg.tune_fraction < 1.0)) throw ConfigError("tune fraction must lie in (0, 1)");
    if (series.size() < cfg.test_size + 2) {
        throw InsufficientDataError("PM10 pipeline needs at least " + std::to_string(cfg.test_size + 2) +
                                    " rows, got " + std::to_string(series.size()));
    }

    const SupervisedSet all = pm10_supervised(series);
    const std::size_t n_train = all.size() - cfg.test_size;
    const SupervisedSet train_raw = all.slice(0, n_train);
    const SupervisedSet test_raw = all.slice(n_train, cfg.test_size);

    const std::size_t n_valid =
        std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(cfg.tune_fraction * static_cast<double>(n_train))));
    if (n_valid >= n_train) {
        throw InsufficientDataError("training window of " + std::to_string(n_train) + " pairs is too short to tune on");
    }

    const Scaler scaler = Scaler::fit(train_raw, cfg.standardize);
    const SupervisedSet train = scaler.apply(train_raw);
    const SupervisedSet test = scaler.apply(test_raw);
    const SupervisedSet tune_train = train.slice(0, n_train - n_valid);
    const SupervisedSet tune_valid = train.slice(n_train - n_valid, n_valid);

    const Loss loss = Loss::l2();
    const double n = static_cast<double>(n_train);
    const TuningGrid grid = TuningGrid::make(n, cfg.lambda_exponents, cfg.tau_exponents, Criterion::MSE);

    TrainConfig tcfg = cfg.train;
    tcfg.seed = derive_seed(cfg.seed, {1});
    const TuningResult tuned = tune_grid(tune_train, tune_valid, grid, cfg.arch, loss, tcfg);

    tcfg.seed = derive_seed(cfg.seed, {3});
    const TrainedModel spdnn = train_spdnn(train, cfg.arch, PenaltyConfig{tuned.best_lambda, tuned.best_tau}, loss, tcfg);
    tcfg.seed = derive_seed(cfg.seed, {2});
    const TrainedModel npdnn = train_npdnn(train, cfg.arch, loss, tcfg);

    std::vector<double> actual(cfg.test_size), dar(cfg.test_size);
    for (std::size_t t = 0; t < cfg.test_size; ++t) {
        const auto r = static_cast<Eigen::Index>(t);
        actual[t] = test_raw.targets[r];
        dar[t] = dar_predict(test_raw.inputs(r, 0), test_raw.inputs(r, 1));
    }

    Pm10Result result;
    result.spdnn = prediction_metrics(actual, scaler.invert(spdnn.network.forward_batch(test.inputs)));
    result.npdnn = prediction_metrics(actual, scaler.invert(npdnn.network.forward_batch(test.inputs)));
    result.dar = prediction_metrics(actual, dar);
    result.lambda = tuned.best_lambda;
    result.tau = tuned.best_tau;
    result.train_rows = n_train;
    result.test_dates.assign(series.dates.end() - static_cast<std::ptrdiff_t>(cfg.test_size), series.dates.end());
    return result;
}

void write_predictions_csv(std::ostream& out, const Pm10Result& result) {
    out << "t,date,actual,spdnn,npdnn,dar\n";
    for (std::size_t t = 0; t < result.dar.per_step.size(); ++t) {
        out << (t + 1) << ',' << (t < result.test_dates.size() ? result.test_dates[t] : "") << ','
            << format_double(result.dar.per_step[t].first) << ',' << format_double(result.spdnn.per_step[t].second)
            << ',' << format_double(result.npdnn.per_step[t].second) << ','
            << format_double(result.dar.per_step[t].second) << '\n';
    }
}

void write_metrics_csv(std::ostream& out, const Pm10Result& result) {
    out << "predictor,mean_abs,mean_rel_pct\n";
    const auto row = [&out](const char* name, const MetricsReport& m) {
        out << name << ',' << format_double(m.mean_abs) << ','
            << (m.mean_rel ? format_double(100.0 * *m.mean_rel) : "undefined") << '\n';
    };
    row("spdnn", result.spdnn);
    row("npdnn", result.npdnn);
    row("dar", result.dar);
}

}  // namespace spdnn
