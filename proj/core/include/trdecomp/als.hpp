#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "trdecomp/dense_tensor.hpp"
#include "trdecomp/tr_cores.hpp"
#include "trdecomp/unfolding.hpp"

namespace trdecomp {

struct AlsConfig {
  std::size_t max_loops = 200;
  /// Stop once a full loop lowers the objective by less than this (absolute).
  double conv_tol = 1e-10;
  /// Relative sigma_min threshold for flagging a rank-deficient microstep.
  double rank_tol = kDefaultRankTolerance;
  std::uint64_t seed = 0;

  /// Throws DomainError on max_loops == 0 or negative tolerances.
  void validate() const;
};

/// Slack allowed by the descent check: f_next <= f_prev + 1e-10 * (1 + f_prev).
inline constexpr double kDescentSlack = 1e-10;

[[nodiscard]] bool is_descent(double before, double after);

/// 1/2 ||T - tau(u)||_F^2.
[[nodiscard]] double objective(const DenseTensor& target, const TRCores& u);

struct MicrostepResult {
  DenseTensor core;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  /// sigma_min <= rank_tol * sigma_max, or fewer rows than unknowns.
  bool rank_deficient = false;
  double objective_after = 0.0;
};

/// Minimizes the objective over the core of one mode with all other cores
/// fixed. The least-squares problem is solved through an SVD of A_i and the
/// minimum-norm minimizer is returned; rank deficiency is reported, not fatal.
[[nodiscard]] MicrostepResult solve_microstep(const DenseTensor& target, const TRCores& u,
                                              Mode mode,
                                              double rank_tol = kDefaultRankTolerance);

struct AlsTrace {
  double initial_objective = 0.0;
  /// Objective after every microstep, in execution order.
  std::vector<double> objectives;
  /// sigma_min(A_i) of every microstep.
  std::vector<double> sigma_mins;
  std::vector<bool> rank_deficient;
  /// max_norm of the iterate after each loop. Boundedness is not guaranteed.
  std::vector<double> loop_max_norms;
  std::size_t loops_run = 0;
  bool converged = false;
  /// False when some objective became NaN or infinite.
  bool finite = true;
  std::size_t descent_violations = 0;
  TRCores final_cores;

  [[nodiscard]] double final_objective() const {
    return objectives.empty() ? initial_objective : objectives.back();
  }
};

/// Alternating least squares: loops of microsteps over modes 1..d.
[[nodiscard]] AlsTrace als_loop(const DenseTensor& target, const TRCores& initial,
                                const AlsConfig& config);

struct OneLoopResult {
  double f_after = 0.0;
  AlsTrace trace;
};

/// Exactly one loop (d microsteps) regardless of config.max_loops.
[[nodiscard]] OneLoopResult one_loop(const DenseTensor& target, const TRCores& initial,
                                     const AlsConfig& config);

}  // namespace trdecomp
