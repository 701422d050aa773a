#pragma once

#include "srsp/grid.hpp"

#include <Eigen/Core>

namespace srsp {

// Thin FFTW wrappers. Plans are created once per grid size with FFTW_ESTIMATE
// so repeated runs pick the same algorithm; plan creation is serialized,
// execution is thread-safe.

/// Unnormalized forward DFT, sum_j u_j exp(-i k.x_j).
Eigen::ArrayXcd forward_transform(const Grid& grid, const Eigen::ArrayXcd& values);

/// Inverse DFT including the 1/N factor, so inverse(forward(u)) == u.
Eigen::ArrayXcd inverse_transform(const Grid& grid, const Eigen::ArrayXcd& coefficients);

/// Real-valued input convenience overload.
Eigen::ArrayXcd forward_transform(const Grid& grid, const Eigen::ArrayXd& values);

}  // namespace srsp
