#include "spdnn/data.hpp"

#include "spdnn/errors.hpp"

namespace spdnn {

SupervisedSet SupervisedSet::slice(std::size_t first, std::size_t count) const {
    if (first + count > size()) throw ArgumentError("slice out of range");
    SupervisedSet out;
    const auto f = static_cast<Eigen::Index>(first);
    const auto c = static_cast<Eigen::Index>(count);
    out.inputs = inputs.middleRows(f, c);
    out.targets = targets.segment(f, c);
    return out;
}

}  // namespace spdnn
