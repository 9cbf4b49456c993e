#pragma once

#include <cstddef>
#include <span>

#include <Eigen/Dense>

#include "trdecomp/dense_tensor.hpp"
#include "trdecomp/tr_cores.hpp"

namespace trdecomp {

/// 1-based mode index i in [1, d].
class Mode {
 public:
  constexpr explicit Mode(std::size_t one_based) : value_(one_based) {}
  [[nodiscard]] constexpr std::size_t value() const { return value_; }
  [[nodiscard]] constexpr std::size_t offset() const { return value_ - 1; }
  friend constexpr bool operator==(Mode, Mode) = default;

 private:
  std::size_t value_;
};

/// Default relative singular-value tolerance for rank decisions.
inline constexpr double kDefaultRankTolerance = 1e-10;

/// B_i with B_i(pi(x_{i+1}, ..., x_d, x_1, ..., x_{i-1}), x_i) = T(x_1..x_d).
/// Shape (prod_{j != i} n_j) x n_i.
[[nodiscard]] Eigen::MatrixXd unfold_target(const DenseTensor& target, Mode mode);

/// A_i from the ordered open chain u^{i+1}, ..., u^{i-1} (d-1 cores).
/// Entry (pi(x_{i+1}..x_{i-1}), pi(k_{i+1}, k_i)) is the (k_{i+1}, k_i) entry of
/// u^{i+1}(x_{i+1}) ... u^{i-1}(x_{i-1}); columns use radixes (r_{i+1}, r_i).
[[nodiscard]] Eigen::MatrixXd alpha(std::span<const DenseTensor> chain);

/// A_i for the current cores: the chain is taken cyclically starting after mode i.
[[nodiscard]] Eigen::MatrixXd alpha(const TRCores& u, Mode mode);

/// X(pi(k_{i+1}, k_i), x) = core(k_i, x, k_{i+1}); shape (r_{i+1} r_i) x n_i.
[[nodiscard]] Eigen::MatrixXd gamma(const DenseTensor& core);

/// Inverse of gamma back to an r_i x n_i x r_{i+1} core.
[[nodiscard]] DenseTensor gamma_inv(const Eigen::MatrixXd& x, std::size_t r_left, std::size_t n,
                                    std::size_t r_right);

/// The least-squares problem min ||A X - B||_F of one ALS microstep.
struct LSProblem {
  Eigen::MatrixXd a_matrix;
  Eigen::MatrixXd b_matrix;
  Mode mode{1};
};

[[nodiscard]] LSProblem build_ls_problem(const DenseTensor& target, const TRCores& u, Mode mode);

struct RankCheck {
  bool full_rank = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

/// Full column rank iff rows >= cols and sigma_min > tol * sigma_max.
/// A wide matrix is reported deficient without factorizing (sigma values 0).
[[nodiscard]] RankCheck check_full_column_rank(const Eigen::MatrixXd& a,
                                               double tol = kDefaultRankTolerance);

/// r^d x r^d matricization of the nonzero block of T used for the genericity
/// condition on the target at split j (1 <= j <= d-1).
///
/// For 1 <= p_l, q_l <= r and 1 <= s <= r^2 the entry
///   T(pi(p_1,q_1), ..., pi(p_{d-1},q_{d-1}), s)
/// is placed at column pi(q_1..q_j, p_j..p_{d-1}) and at the row formed by the
/// digits (s_hi, p_1..p_{j-1}, q_{j+1}..q_{d-1}, s_lo), where s = pi(s_hi, s_lo).
/// Splitting s around the remaining digits is a fixed row permutation of the
/// plain (block, s) merge and does not change the column rank.
[[nodiscard]] Eigen::MatrixXd reshape_tj(const DenseTensor& target, std::size_t j, std::size_t r);

}  // namespace trdecomp
