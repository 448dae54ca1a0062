#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Core>

namespace spdnn {

/// Row-major design matrix: one sample per row. Row-major keeps each input
/// vector contiguous and makes minibatch gathers a single memcpy per row.
using InputMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Lag-embedded pairs (X_t, Y_t).
struct SupervisedSet {
    InputMatrix inputs;
    Eigen::VectorXd targets;

    std::size_t size() const noexcept { return static_cast<std::size_t>(targets.size()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(inputs.cols()); }
    bool empty() const noexcept { return targets.size() == 0; }

    std::span<const double> input(std::size_t i) const noexcept {
        return {inputs.data() + i * dim(), dim()};
    }

    /// Rows [first, first + count).
    SupervisedSet slice(std::size_t first, std::size_t count) const;
};

}  // namespace spdnn
