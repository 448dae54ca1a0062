#include "spdnn/tuning.hpp"

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>

#include "spdnn/csv.hpp"
#include "spdnn/errors.hpp"
#include "spdnn/penalty.hpp"

namespace spdnn {

std::string to_string(Criterion c) { return c == Criterion::MSE ? "mse" : "mae"; }

Criterion parse_criterion(const std::string& name) {
    if (name == "mse") return Criterion::MSE;
    if (name == "mae") return Criterion::MAE;
    throw ConfigError("unknown criterion '" + name + "' (expected mse or mae)");
}

Criterion criterion_for(const Loss& loss) {
    return loss.kind() == Loss::Kind::L1 ? Criterion::MAE : Criterion::MSE;
}

double validation_score(Criterion c, const Eigen::VectorXd& preds, const Eigen::VectorXd& targets) {
    if (preds.size() != targets.size()) throw ShapeError("validation_score: length mismatch");
    if (preds.size() == 0) throw ArgumentError("validation_score: empty validation set");
    const Eigen::ArrayXd diff = preds.array() - targets.array();
    return c == Criterion::MSE ? diff.square().mean() : diff.abs().mean();
}

TuningGrid TuningGrid::make(double n, const std::vector<int>& lambda_exps, const std::vector<int>& tau_exps,
                            Criterion criterion) {
    if (!(n > 1.0)) throw ConfigError("tuning grid needs n > 1 so that log(n) > 0");
    TuningGrid g;
    g.criterion = criterion;
    g.lambda_exponents = lambda_exps;
    g.tau_exponents = tau_exps;
    const double log_n = std::log(n);
    for (int i : lambda_exps) g.lambda_values.push_back(std::pow(10.0, -i) * log_n / n);
    for (int j : tau_exps) g.tau_values.push_back(std::pow(10.0, -j) / log_n);
    g.validate();
    return g;
}

std::vector<int> TuningGrid::full_exponents() { return {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 10}; }

std::vector<int> TuningGrid::thinned_exponents() { return {0, 2, 4, 6, 8, 10}; }

TuningGrid TuningGrid::full(double n, Criterion criterion) {
    return make(n, full_exponents(), full_exponents(), criterion);
}

TuningGrid TuningGrid::thinned(double n, Criterion criterion) {
    return make(n, thinned_exponents(), thinned_exponents(), criterion);
}

void TuningGrid::validate() const {
    if (lambda_values.empty() || tau_values.empty()) throw ConfigError("tuning grid is empty");
    for (double v : lambda_values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tuning grid: lambda values must be positive");
    }
    for (double v : tau_values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError("tuning grid: tau values must be positive");
    }
}

TuningResult tune_grid(const SupervisedSet& train, const SupervisedSet& valid, const TuningGrid& grid,
                       const Architecture& arch, const Loss& loss, const TrainConfig& cfg, Activation act) {
    if (train.empty() || valid.empty()) throw ArgumentError("tune_grid: training and validation sets must be nonempty");
    grid.validate();

    std::vector<TuningCell> table;
    std::size_t best_cell = 0;
    std::optional<TrainedModel> best_model;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < grid.lambda_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.tau_values.size(); ++j) {
            TuningCell cell;
            cell.lambda_index = i;
            cell.tau_index = j;
            cell.lambda = grid.lambda_values[i];
            cell.tau = grid.tau_values[j];
            TrainConfig cell_cfg = cfg;
            cell_cfg.seed = derive_seed(cfg.seed, {i, j});
            try {
                TrainedModel model = train_spdnn(train, arch, PenaltyConfig{cell.lambda, cell.tau}, loss, cell_cfg, act);
                cell.score = validation_score(grid.criterion, model.network.forward_batch(valid.inputs), valid.targets);
                cell.l0 = l0_norm(model.network.params());
                cell.epochs = model.stopped_epoch;
                cell.diverged = !std::isfinite(cell.score);
                if (!cell.diverged && cell.score < best_score) {
                    best_score = cell.score;
                    best_model = std::move(model);
                    best_cell = table.size();
                }
            } catch (const DivergenceError& e) {
                cell.diverged = true;
                cell.epochs = static_cast<std::size_t>(e.epoch());
            }
            if (cell.diverged) cell.score = std::numeric_limits<double>::quiet_NaN();
            table.push_back(cell);
        }
    }
    if (!best_model) throw TuningError("every (lambda, tau) cell diverged");
    const TuningCell& best = table[best_cell];
    return TuningResult{best_cell, best.lambda, best.tau, std::move(*best_model), std::move(table)};
}

void write_score_table(std::ostream& out, const TuningResult& result, const TuningGrid& grid) {
    out << "i,j,lambda,tau,criterion,score,l0,epochs,status\n";
    for (const TuningCell& c : result.table) {
        out << grid.lambda_exponents.at(c.lambda_index) << ',' << grid.tau_exponents.at(c.tau_index) << ','
            << format_double(c.lambda) << ',' << format_double(c.tau) << ',' << to_string(grid.criterion) << ','
            << format_double(c.score) << ',' << c.l0 << ',' << c.epochs << ',' << (c.diverged ? "diverged" : "ok")
            << '\n';
    }
}

}  // namespace spdnn
