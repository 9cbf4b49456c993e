#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "trdecomp/dense_tensor.hpp"

namespace trdecomp {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// A tensor ring: d third-order cores, core i of shape r_i x n_i x r_{i+1}
/// with the periodic wrap r_{d+1} = r_1.
class TRCores {
 public:
  TRCores() = default;
  explicit TRCores(std::vector<DenseTensor> cores);

  [[nodiscard]] std::size_t order() const { return cores_.size(); }
  [[nodiscard]] const std::vector<DenseTensor>& cores() const { return cores_; }

  /// 0-based core access.
  [[nodiscard]] const DenseTensor& core(std::size_t k) const { return cores_.at(k); }
  /// Replaces core k; the replacement must keep the shape of the old core.
  void set_core(std::size_t k, DenseTensor core);

  /// Internal dimensions r_1..r_d (r_i is the leading dim of core i).
  [[nodiscard]] Shape ranks() const;
  /// External dimensions n_1..n_d.
  [[nodiscard]] Shape dims() const;
  [[nodiscard]] std::size_t bond_dimension() const;

  TRCores& operator+=(const TRCores& other);
  TRCores& operator-=(const TRCores& other);

  friend bool operator==(const TRCores&, const TRCores&) = default;

 private:
  std::vector<DenseTensor> cores_;
};

[[nodiscard]] TRCores operator+(TRCores lhs, const TRCores& rhs);
[[nodiscard]] TRCores operator-(TRCores lhs, const TRCores& rhs);

/// Zero cores with uniform bond dimension m.
[[nodiscard]] TRCores zero_cores(std::span<const std::size_t> dims, std::size_t m);

/// Lateral slice u(:, x, :) of a third-order core as an r x r' matrix (x is 1-based).
[[nodiscard]] Eigen::MatrixXd core_slice(const DenseTensor& core, std::size_t x);

/// Open-chain contraction of third-order cores c_1..c_L.
///
/// Row p enumerates (x_1..x_L) lexicographically; column a*r_last + b holds
/// the (a, b) entry of c_1(x_1) c_2(x_2) ... c_L(x_L), where a runs over the
/// leading dim of c_1 and b over the trailing dim of c_L. Cost is linear in
/// the number of rows and cubic in the bond dimension.
[[nodiscard]] RowMatrix chain_contract(std::span<const DenseTensor> chain);

/// Full tensor tau(u), entry (x_1..x_d) = trace(u^1(x_1) ... u^d(x_d)).
[[nodiscard]] DenseTensor tau(const TRCores& u);

/// Single entry of tau(u) at the 1-based multi-index x.
[[nodiscard]] double tau_entry(const TRCores& u, std::span<const std::size_t> x);

/// Gauge tuple A_1..A_d, A_i of size r_i x r_i.
struct GaugeTuple {
  std::vector<Eigen::MatrixXd> matrices;
};

/// Relative singular-value floor below which a gauge matrix counts as singular.
inline constexpr double kGaugeSingularTolerance = 1e-10;

/// v^i(x) = A_i u^i(x) A_{i+1}^{-1} with A_{d+1} = A_1. tau is preserved.
/// Throws DomainError if shapes do not match or some A_i has
/// sigma_min <= 1e-10 * sigma_max.
[[nodiscard]] TRCores gauge_transform(const TRCores& u, const GaugeTuple& gauge);

/// Tuple of inverses (A_1^{-1}, ..., A_d^{-1}), same singularity check.
[[nodiscard]] GaugeTuple inverse(const GaugeTuple& gauge);

/// max over every entry of every core of |u^i(k, x, k')|.
[[nodiscard]] double max_norm(const TRCores& u);

/// max over i, k, k' of |v^i(k, n, k')|, i.e. restricted to the last external
/// slice. All external dims must equal a common n.
[[nodiscard]] double max_norm_slice_n(const TRCores& v);

/// I.i.d. standard normal cores with uniform bond dimension m.
/// Entries are drawn core by core in storage order from Rng(seed).
[[nodiscard]] TRCores random_cores(std::size_t d, std::size_t m,
                                   std::span<const std::size_t> dims, std::uint64_t seed);

/// Bond-r cores in the restricted set where every fiber w^i(k1, :, k2) vanishes
/// beyond position r^2. Gaussian on positions 1..r^2. Requires n_i >= r^2.
[[nodiscard]] TRCores random_w_cores(std::size_t d, std::size_t r,
                                     std::span<const std::size_t> dims, std::uint64_t seed);

}  // namespace trdecomp
