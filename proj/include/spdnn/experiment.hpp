#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "spdnn/dgp.hpp"
#include "spdnn/loss.hpp"
#include "spdnn/network.hpp"
#include "spdnn/train.hpp"
#include "spdnn/tuning.hpp"

namespace spdnn {

/// Maps a batch of inputs (one row per sample) to predictions.
using BatchPredictor = std::function<Eigen::VectorXd(const InputMatrix&)>;

BatchPredictor network_predictor(const Network& net);

/// The true conditional mean f of a DGP, as a predictor on (y1, y2, x) rows.
BatchPredictor oracle_predictor(const DgpSpec& dgp);

struct ExcessRisk {
    double value = 0.0;      ///< (1/m) sum [ell(h(X_t), Y_t) - ell(f(X_t), Y_t)], unclipped
    double std_error = 0.0;  ///< sample sd of the per-step differences over sqrt(m)
    std::size_t m = 0;

    bool negative() const noexcept { return value < 0.0; }
};

/// Excess risk of h over f on a given test set, whose inputs are (y1, y2, x).
ExcessRisk excess_risk_on(const BatchPredictor& h, const DgpSpec& dgp, const SupervisedSet& test,
                          const Loss& loss);

/// Simulates a fresh trajectory of length m + 2 and evaluates excess_risk_on.
/// Throws DivergenceError if the simulation blows up.
ExcessRisk excess_risk(const BatchPredictor& h, const DgpSpec& dgp, std::size_t m, const Loss& loss, Rng& rng);
ExcessRisk excess_risk(const Network& net, const DgpSpec& dgp, std::size_t m, const Loss& loss, Rng& rng);

struct ExperimentSpec {
    DgpSpec dgp;
    std::vector<std::size_t> sizes{250, 500, 1000};
    std::size_t replications = 20;
    std::size_t test_size = 10000;
    std::vector<Loss::Kind> losses{Loss::Kind::L1, Loss::Kind::L2};
    Architecture arch;
    Activation activation = Activation::ReLU;
    TrainConfig train;  ///< seed is ignored; every run gets a derived one
    std::vector<int> lambda_exponents = TuningGrid::thinned_exponents();
    std::vector<int> tau_exponents = TuningGrid::thinned_exponents();
    RngSeed master_seed = 0;
    std::size_t threads = 1;

    /// Throws ConfigError.
    void validate() const;
};

struct ResultRow {
    std::string dgp;
    std::size_t n = 0;
    std::size_t rep = 0;
    std::string estimator;  ///< "spdnn" or "npdnn"
    std::string loss;       ///< "l1" or "l2"
    double excess_risk = 0.0;
    double lambda = 0.0;
    std::optional<double> tau;  ///< empty for NPDNN
    std::size_t l0 = 0;
    std::string status;  ///< "ok", "negative" or "failed"
};

bool operator<(const ResultRow& a, const ResultRow& b);

/// Seed of replication rep at size n: derive_seed(master, {label_hash(dgp), n, rep}).
RngSeed replication_seed(RngSeed master, const std::string& dgp, std::size_t n, std::size_t rep);

/// One (size, replication) cell: simulates training, validation and test
/// trajectories, then for every loss tunes SPDNN on the grid (criterion paired
/// with the loss) and trains NPDNN, and evaluates both on the shared test set.
/// Any error turns the cell's rows into "failed" rows.
std::vector<ResultRow> run_replication(const ExperimentSpec& spec, std::size_t n, std::size_t rep);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// All (size, replication) cells on spec.threads workers; rows canonically sorted.
std::vector<ResultRow> run_replications(const ExperimentSpec& spec, const ProgressFn& progress = {});

/// CSV "dgp,n,rep,estimator,loss,excess_risk,lambda,tau,l0,status".
void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows);
/// Inverse of write_results_csv. Throws IngestionError.
std::vector<ResultRow> read_results_csv(std::istream& in);

struct ResultSummary {
    std::string dgp;
    std::size_t n = 0;
    std::string estimator;
    std::string loss;
    std::size_t count = 0;  ///< non-failed rows
    std::size_t failed = 0;
    double median = 0.0;
    double mean = 0.0;
};

/// Median and mean excess risk per (dgp, n, estimator, loss), failed rows excluded.
std::vector<ResultSummary> summarize(const std::vector<ResultRow>& rows);

void write_summary_csv(std::ostream& out, const std::vector<ResultSummary>& summary);

double median(std::vector<double> values);

}  // namespace spdnn
