#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "spdnn/data.hpp"
#include "spdnn/loss.hpp"
#include "spdnn/network.hpp"
#include "spdnn/train.hpp"

namespace spdnn {

enum class Criterion { MSE, MAE };

std::string to_string(Criterion c);
Criterion parse_criterion(const std::string& name);

/// MSE for L2, MAE for L1 (and MSE for custom losses).
Criterion criterion_for(const Loss& loss);

/// Mean squared or mean absolute error of preds against targets.
double validation_score(Criterion c, const Eigen::VectorXd& preds, const Eigen::VectorXd& targets);

/// lambda_i = 10^{-i} log(n)/n and tau_j = 10^{-j}/log(n).
struct TuningGrid {
    std::vector<double> lambda_values;
    std::vector<double> tau_values;
    std::vector<int> lambda_exponents;
    std::vector<int> tau_exponents;
    Criterion criterion = Criterion::MSE;

    static TuningGrid make(double n, const std::vector<int>& lambda_exps, const std::vector<int>& tau_exps,
                           Criterion criterion);
    /// i, j = 0..10.
    static TuningGrid full(double n, Criterion criterion);
    /// i, j in {0, 2, 4, 6, 8, 10}.
    static TuningGrid thinned(double n, Criterion criterion);

    static std::vector<int> full_exponents();
    static std::vector<int> thinned_exponents();

    std::size_t cells() const noexcept { return lambda_values.size() * tau_values.size(); }
    /// Throws ConfigError if empty or any value is not positive and finite.
    void validate() const;
};

struct TuningCell {
    std::size_t lambda_index = 0;
    std::size_t tau_index = 0;
    double lambda = 0.0;
    double tau = 0.0;
    double score = 0.0;  ///< NaN when the cell diverged
    std::size_t l0 = 0;
    std::size_t epochs = 0;
    bool diverged = false;
};

struct TuningResult {
    std::size_t best_cell = 0;  ///< index into table
    double best_lambda = 0.0;
    double best_tau = 0.0;
    TrainedModel best_model;
    std::vector<TuningCell> table;  ///< row-major in (lambda, tau)

    const TuningCell& best() const { return table.at(best_cell); }
};

/// Trains one SPDNN per (lambda, tau) cell on train, the cell seed derived
/// from (cfg.seed, i, j), and keeps the cell with the lowest validation
/// criterion. Ties go to the smaller lambda index, then the smaller tau index.
/// Throws TuningError if every cell diverges.
TuningResult tune_grid(const SupervisedSet& train, const SupervisedSet& valid, const TuningGrid& grid,
                       const Architecture& arch, const Loss& loss, const TrainConfig& cfg,
                       Activation act = Activation::ReLU);

/// CSV "i,j,lambda,tau,criterion,score,l0,epochs,status" where i and j are the
/// grid exponents.
void write_score_table(std::ostream& out, const TuningResult& result, const TuningGrid& grid);

}  // namespace spdnn
