#pragma once

// Slow reference implementations written directly from the definitions,
// sharing no code paths with the library beyond DenseTensor storage.

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "trdecomp/dense_tensor.hpp"
#include "trdecomp/tr_cores.hpp"

namespace oracle {

using trdecomp::DenseTensor;
using trdecomp::Shape;
using trdecomp::TRCores;

/// 0-based digits of a flat row-major offset.
std::vector<std::size_t> digits(std::size_t offset, const Shape& radixes);
/// Row-major flat offset from 0-based digits.
std::size_t offset(const std::vector<std::size_t>& digits, const Shape& radixes);

/// tau by the explicit sum over all internal indices k_1..k_d.
DenseTensor tau(const TRCores& u);

/// B_i by iterating all multi-indices of T (mode 1-based).
Eigen::MatrixXd unfold(const DenseTensor& t, std::size_t mode);

/// A_i by the explicit sum over the internal indices of the open chain.
Eigen::MatrixXd alpha(const TRCores& u, std::size_t mode);

/// T0 written out from its defining sum.
DenseTensor t0(std::size_t d, std::size_t r, std::size_t n);

/// u0 written out from its delta-pattern definition by enumerating p and q.
TRCores u0(std::size_t d, std::size_t r, std::size_t n);

/// Minimum-norm least-squares solution via complete orthogonal decomposition.
Eigen::MatrixXd min_norm_lstsq(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Gaussian matrix from std::normal_distribution (independent of the library RNG).
Eigen::MatrixXd gaussian(std::size_t rows, std::size_t cols, unsigned seed);

/// Well-conditioned r x r matrix: orthogonal times a diagonal in (1, 2).
Eigen::MatrixXd well_conditioned(std::size_t r, unsigned seed);

}  // namespace oracle
