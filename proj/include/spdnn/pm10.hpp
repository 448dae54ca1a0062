#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spdnn/data.hpp"
#include "spdnn/network.hpp"
#include "spdnn/rng.hpp"
#include "spdnn/train.hpp"
#include "spdnn/tuning.hpp"

namespace spdnn {

struct Pm10Series {
    std::vector<std::string> dates;
    std::vector<double> pm10;
    std::vector<double> rh;

    std::size_t size() const noexcept { return pm10.size(); }
};

/// Reads "date,pm10,rh" (columns in any order, extra columns ignored, '#'
/// lines skipped). Throws IngestionError naming the 1-based line.
Pm10Series read_pm10_csv(std::istream& in);
Pm10Series read_pm10_csv(const std::string& path);
void write_pm10_csv(std::ostream& out, const Pm10Series& series);

/// Conditional mean of the fitted DAR model:
/// 37.946 + 0.330 pm_prev - 0.210 rh_prev.
double dar_predict(double pm_prev, double rh_prev);

/// A series driven exactly by the DAR mean equation (plus noise_sd times a
/// standardized uniform shock scaled by the DAR volatility, 0 by default),
/// with a bounded AR(1) humidity around 75%. Dates run daily from 2005-01-21.
Pm10Series synthetic_pm10(std::size_t rows, RngSeed seed, double noise_sd = 0.0);

struct MetricsReport {
    double mean_abs = 0.0;
    std::optional<double> mean_rel;  ///< fraction; empty if some actual <= 0
    std::vector<std::pair<double, double>> per_step;  ///< (actual, predicted)

    /// Throws UndefinedMetricError when mean_rel is empty.
    double relative() const;
};

/// Mean absolute and mean relative error. Throws ArgumentError on empty or
/// mismatched series; a nonpositive actual leaves mean_rel empty.
MetricsReport prediction_metrics(const std::vector<double>& actuals, const std::vector<double>& preds);

/// Pairs ((PM_{t-1}, RH_{t-1}), PM_t) for t = 2..rows.
SupervisedSet pm10_supervised(const Pm10Series& series);

struct Pm10Config {
    Architecture arch = Architecture::mlp(2, 2, 100);
    TrainConfig train;
    std::vector<int> lambda_exponents = TuningGrid::thinned_exponents();
    std::vector<int> tau_exponents = TuningGrid::thinned_exponents();
    std::size_t test_size = 100;
    double tune_fraction = 0.25;  ///< tail of the training window held out for tuning
    bool standardize = true;      ///< affine-scale inputs and target with training-window moments
    RngSeed seed = 0;
};

struct Pm10Result {
    MetricsReport spdnn;
    MetricsReport npdnn;
    MetricsReport dar;
    double lambda = 0.0;
    double tau = 0.0;
    std::size_t train_rows = 0;
    std::vector<std::string> test_dates;
};

/// Trains SPDNN (tuned on the tail of the training window, refit on all of
/// it) and NPDNN on every pair but the last test_size, then predicts those
/// one step ahead from observed lags, alongside the DAR predictor. Throws
/// InsufficientDataError below test_size + 2 rows.
Pm10Result pm10_pipeline(const Pm10Series& series, const Pm10Config& cfg);

/// CSV "t,date,actual,spdnn,npdnn,dar".
void write_predictions_csv(std::ostream& out, const Pm10Result& result);

/// CSV "predictor,mean_abs,mean_rel_pct".
void write_metrics_csv(std::ostream& out, const Pm10Result& result);

}  // namespace spdnn
