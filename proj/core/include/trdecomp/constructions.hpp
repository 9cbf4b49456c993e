#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "trdecomp/dense_tensor.hpp"
#include "trdecomp/tr_cores.hpp"

namespace trdecomp {

/// Refuse to allocate cores larger than this many bytes (bond r^{d-1} grows fast).
inline constexpr std::size_t kDefaultCoreByteCap = std::size_t{2} << 30;

/// Bond-(r+1) target with a spurious local minimum at bond r^{d-1}:
///   T0 = sum_{k_1..k_d = 1}^{r} (x)_i e_{pi(k_{i+1}, k_i)} + (x)_i e_n.
/// Requires d >= 3, r >= 2, n >= r^2 + 1. Entries are 0/1 with r^d + 1 ones.
[[nodiscard]] DenseTensor build_t0(std::size_t d, std::size_t r, std::size_t n);

/// The local minimum u0 of bond m = r^{d-1}. For i < d the fiber
/// u^i(pi(p), :, pi(q)) is e_{pi(p_i, q_i)} when p and q agree off position i;
/// u^d(pi(p), :, pi(q)) is e_{pi(p_1, q_{d-1})} when p_{l+1} = q_l for l < d-1.
/// tau(u0) = T0 - (x)_i e_n and the objective at u0 is exactly 1/2.
[[nodiscard]] TRCores build_u0(std::size_t d, std::size_t r, std::size_t n,
                               std::size_t byte_cap = kDefaultCoreByteCap);

struct SpuriousInstance {
  DenseTensor target;
  TRCores local_min;
  std::size_t d = 0;
  std::size_t r = 0;
  std::size_t n = 0;
};

[[nodiscard]] SpuriousInstance build_spurious_instance(std::size_t d, std::size_t r, std::size_t n,
                                                       std::size_t byte_cap = kDefaultCoreByteCap);

/// Weights and orthonormal directions for the generalized target.
/// lambdas[i] holds r^2 + 1 positive weights for mode i; bases[i] is n x (r^2 + 1)
/// with orthonormal columns. The last weight/column forms the residual term.
struct GeneralizedParams {
  std::vector<std::vector<double>> lambdas;
  std::vector<Eigen::MatrixXd> bases;
};

/// lambda = 1 everywhere and the standard basis e_1..e_{r^2}, e_n.
[[nodiscard]] GeneralizedParams standard_generalized_params(std::size_t d, std::size_t r,
                                                            std::size_t n);

struct GeneralizedInstance {
  DenseTensor target;
  TRCores cores;
};

/// Target sum_k (x)_i lambda^i g^i at pi(k_{i+1}, k_i) plus (x)_i lambda^i g^i at r^2+1,
/// and u0 with each e_k (k <= r^2) of mode i replaced by lambda^i_k g^i_k.
/// Throws DomainError on non-positive weights or columns that are not
/// orthonormal to 1e-10.
[[nodiscard]] GeneralizedInstance build_generalized_t0(std::size_t d, std::size_t r, std::size_t n,
                                                       const GeneralizedParams& params);

/// Bond-r point w with w^i(k1, :, k2) = e_{pi(k2, k1)}. Requires n >= r^2.
[[nodiscard]] TRCores build_witness_w(std::size_t d, std::size_t r, std::size_t n);

/// Bond-r^{d-1} cores with tau(result) == T: cores 1..d-1 follow the u0
/// pattern and u^d(pi(p), :, pi(q)) = T(pi(q_1, p_1), ..., pi(q_{d-1}, p_{d-1}), :).
/// T must vanish wherever some x_i > r^2 for i < d.
[[nodiscard]] TRCores build_witness_u(const DenseTensor& target, std::size_t d, std::size_t r,
                                      std::size_t byte_cap = kDefaultCoreByteCap);

}  // namespace trdecomp
