#include <doctest.h>

#include <cmath>
#include <sstream>

#include "spdnn/csv.hpp"
#include "spdnn/errors.hpp"
#include "spdnn/pm10.hpp"

using namespace spdnn;

namespace {

Pm10Config quick_config() {
    Pm10Config cfg;
    cfg.arch = Architecture::mlp(2, 1, 10);
    cfg.train.max_epochs = 20;
    cfg.lambda_exponents = {0, 4};
    cfg.tau_exponents = {2};
    cfg.seed = 3;
    return cfg;
}

}  // namespace

TEST_CASE("DAR mean equation") {
    CHECK(dar_predict(0.0, 0.0) == doctest::Approx(37.946).epsilon(1e-15));
    CHECK(dar_predict(100.0, 70.0) == doctest::Approx(37.946 + 33.0 - 14.7).epsilon(1e-15));
    CHECK(dar_predict(100.0, 70.0) == doctest::Approx(56.246));
    CHECK(dar_predict(11.0, 50.0) - dar_predict(10.0, 50.0) == doctest::Approx(0.330));
    CHECK(dar_predict(10.0, 51.0) - dar_predict(10.0, 50.0) == doctest::Approx(-0.210));
}

TEST_CASE("prediction metrics") {
    const MetricsReport r = prediction_metrics({100.0, 50.0}, {110.0, 45.0});
    CHECK(r.mean_abs == doctest::Approx(7.5));
    CHECK(r.relative() == doctest::Approx(0.10));
    REQUIRE(r.per_step.size() == 2);
    CHECK(r.per_step[1] == std::pair<double, double>{50.0, 45.0});

    const MetricsReport one = prediction_metrics({100.0}, {90.0});
    CHECK(one.mean_abs == 10.0);
    CHECK(one.relative() == doctest::Approx(0.10));

    // Rescaling actuals and predictions leaves the relative error unchanged.
    const MetricsReport scaled = prediction_metrics({1000.0, 500.0}, {1100.0, 450.0});
    CHECK(scaled.relative() == doctest::Approx(r.relative()).epsilon(1e-14));
    CHECK(scaled.mean_abs == doctest::Approx(10.0 * r.mean_abs));

    const MetricsReport zero = prediction_metrics({0.0, 5.0}, {1.0, 5.0});
    CHECK_FALSE(zero.mean_rel.has_value());
    CHECK_THROWS_AS(zero.relative(), UndefinedMetricError);
    CHECK_THROWS_AS(prediction_metrics({}, {}), ArgumentError);
    CHECK_THROWS_AS(prediction_metrics({1.0}, {1.0, 2.0}), ArgumentError);
}

TEST_CASE("PM10 CSV ingestion") {
    std::stringstream ok("# comment\nrh,extra,date,pm10\n80,x,2005-01-21,40\n75.5,y,2005-01-22,38.25\n");
    const Pm10Series s = read_pm10_csv(ok);
    REQUIRE(s.size() == 2);
    CHECK(s.dates[1] == "2005-01-22");
    CHECK(s.pm10[1] == 38.25);
    CHECK(s.rh[0] == 80.0);

    auto failing_line = [](const std::string& text) {
        std::stringstream in(text);
        try {
            read_pm10_csv(in);
        } catch (const IngestionError& e) {
            return e.row();
        }
        return 0L;
    };
    CHECK(failing_line("date,pm10,rh\n2005-01-21,40,80\n2005-01-22,abc,80\n") == 3);
    CHECK(failing_line("date,pm10,rh\n2005-01-21,40\n") == 2);
    CHECK(failing_line("date,pm10\n2005-01-21,40\n") == 1);
    CHECK(failing_line("date,pm10,rh\n2005-01-21,40,nan\n") == 2);
    CHECK(failing_line("") == -1);
    CHECK_THROWS_AS(read_pm10_csv(std::string("/nonexistent/pm10.csv")), IngestionError);

    const Pm10Series syn = synthetic_pm10(30, 1);
    std::stringstream round;
    write_pm10_csv(round, syn);
    const Pm10Series back = read_pm10_csv(round);
    CHECK(back.pm10 == syn.pm10);
    CHECK(back.rh == syn.rh);
    CHECK(back.dates == syn.dates);
}

TEST_CASE("synthetic series") {
    const Pm10Series s = synthetic_pm10(408, 7);
    REQUIRE(s.size() == 408);
    CHECK(s.dates.front() == "2005-01-21");
    CHECK(s.dates[11] == "2005-02-01");
    for (std::size_t t = 1; t < s.size(); ++t) {
        CHECK(s.pm10[t] == dar_predict(s.pm10[t - 1], s.rh[t - 1]));
        CHECK(s.rh[t] >= 0.0);
        CHECK(s.rh[t] <= 100.0);
    }
    const Pm10Series noisy = synthetic_pm10(408, 7, 1.0);
    CHECK(noisy.pm10 != s.pm10);
    for (double pm : noisy.pm10) CHECK(pm >= 1.0);
}

TEST_CASE("supervised pairs") {
    Pm10Series s;
    s.dates = {"a", "b", "c"};
    s.pm10 = {1.0, 2.0, 3.0};
    s.rh = {10.0, 20.0, 30.0};
    const SupervisedSet d = pm10_supervised(s);
    REQUIRE(d.size() == 2);
    CHECK(d.inputs(1, 0) == 2.0);
    CHECK(d.inputs(1, 1) == 20.0);
    CHECK(d.targets[1] == 3.0);
}

TEST_CASE("pipeline on a DAR-driven series") {
    const Pm10Series s = synthetic_pm10(160, 5);
    Pm10Config cfg = quick_config();
    cfg.test_size = 40;
    const Pm10Result r = pm10_pipeline(s, cfg);
    CHECK(r.dar.mean_abs == 0.0);
    CHECK(r.dar.relative() == 0.0);
    CHECK(r.train_rows == 119);
    REQUIRE(r.test_dates.size() == 40);
    CHECK(r.test_dates.back() == s.dates.back());
    CHECK(std::isfinite(r.spdnn.mean_abs));
    CHECK(std::isfinite(r.npdnn.mean_abs));

    // Metrics recomputed from the written predictions agree.
    std::stringstream preds;
    write_predictions_csv(preds, r);
    std::string line;
    std::getline(preds, line);
    CHECK(line == "t,date,actual,spdnn,npdnn,dar");
    double sp_abs = 0.0, np_abs = 0.0, sp_rel = 0.0;
    std::size_t rows = 0;
    while (std::getline(preds, line)) {
        const auto f = split_csv_line(line);
        REQUIRE(f.size() == 6);
        double actual = 0.0, sp = 0.0, np = 0.0, dar = 0.0;
        REQUIRE(parse_double(f[2], actual));
        REQUIRE(parse_double(f[3], sp));
        REQUIRE(parse_double(f[4], np));
        REQUIRE(parse_double(f[5], dar));
        CHECK(dar == actual);
        sp_abs += std::abs(actual - sp);
        np_abs += std::abs(actual - np);
        sp_rel += std::abs(actual - sp) / actual;
        ++rows;
    }
    REQUIRE(rows == 40);
    CHECK(std::abs(sp_abs / 40.0 - r.spdnn.mean_abs) < 1e-12);
    CHECK(std::abs(np_abs / 40.0 - r.npdnn.mean_abs) < 1e-12);
    CHECK(std::abs(sp_rel / 40.0 - r.spdnn.relative()) < 1e-12);

    std::stringstream metrics;
    write_metrics_csv(metrics, r);
    CHECK(metrics.str().find("dar,0,0\n") != std::string::npos);

    const Pm10Result again = pm10_pipeline(s, cfg);
    CHECK(again.spdnn.mean_abs == r.spdnn.mean_abs);
    CHECK(again.lambda == r.lambda);
}

TEST_CASE("pipeline preconditions") {
    Pm10Config cfg = quick_config();
    cfg.test_size = 100;
    CHECK_THROWS_AS(pm10_pipeline(synthetic_pm10(101, 1), cfg), InsufficientDataError);
    CHECK_THROWS_AS(pm10_supervised(synthetic_pm10(1, 1)), InsufficientDataError);
    cfg.tune_fraction = 1.5;
    CHECK_THROWS_AS(pm10_pipeline(synthetic_pm10(200, 1), cfg), ConfigError);
    cfg = quick_config();
    cfg.arch = Architecture::mlp(3, 1, 4);
    CHECK_THROWS_AS(pm10_pipeline(synthetic_pm10(200, 1), cfg), ConfigError);
}

TEST_CASE("undefined relative error propagates to the metrics file") {
    Pm10Series s = synthetic_pm10(60, 2);
    s.pm10[55] = 0.0;  // lands in the test window as an actual value
    Pm10Config cfg = quick_config();
    cfg.test_size = 10;
    const Pm10Result r = pm10_pipeline(s, cfg);
    CHECK_THROWS_AS(r.dar.relative(), UndefinedMetricError);
    std::stringstream metrics;
    write_metrics_csv(metrics, r);
    CHECK(metrics.str().find("dar,") != std::string::npos);
    CHECK(metrics.str().find("undefined") != std::string::npos);
}
