#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trdecomp/als.hpp"
#include "trdecomp/tr_cores.hpp"

namespace trdecomp {

/// Adds an independent Uniform[-c, c] draw to every entry of every core.
/// c == 0 returns the input unchanged; c < 0 throws DomainError.
[[nodiscard]] TRCores perturb(const TRCores& u, double c, std::uint64_t seed);

/// c_steps evenly spaced values from c_min to c_max inclusive.
[[nodiscard]] std::vector<double> linspace(double c_min, double c_max, std::size_t c_steps);

inline constexpr double kDefaultTrapEpsilon = 1e-6;

struct TrapExperimentConfig {
  std::size_t d = 3;
  std::size_t r = 3;
  std::size_t n = 10;
  std::vector<double> c_values = linspace(0.0, 0.3, 16);
  std::size_t trials_per_c = 50;
  AlsConfig als;
  /// A run is trapped iff its final objective is >= 1/2 - trap_epsilon.
  double trap_epsilon = kDefaultTrapEpsilon;
  std::uint64_t base_seed = 0;
  std::size_t threads = 1;

  void validate() const;
};

enum class TrialOutcome { trapped, escaped, failed };

[[nodiscard]] const char* to_string(TrialOutcome outcome);

struct TrapTrial {
  std::size_t c_index = 0;
  std::size_t trial = 0;
  double c = 0.0;
  TrialOutcome outcome = TrialOutcome::failed;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  /// ||tau(u_final) - tau(u0)||_F.
  double tau_distance = 0.0;
  std::size_t loops = 0;
  bool converged = false;
  std::size_t descent_violations = 0;
  std::string error;
};

struct TrapSummary {
  std::size_t c_index = 0;
  double c = 0.0;
  std::size_t trials = 0;
  std::size_t trapped = 0;
  std::size_t escaped = 0;
  std::size_t failed = 0;
  /// Mean over trials that did not fail; NaN when all failed.
  double mean_final_objective = 0.0;

  [[nodiscard]] double trap_fraction() const {
    return trials == 0 ? 0.0 : static_cast<double>(trapped) / static_cast<double>(trials);
  }
};

struct TrapExperimentResult {
  std::vector<TrapTrial> trials;  // ordered by (c_index, trial)
  std::vector<TrapSummary> summaries;
};

/// Seed of trial t at perturbation index c_index; independent of run order.
[[nodiscard]] std::uint64_t trap_trial_seed(std::uint64_t base_seed, std::size_t c_index,
                                            std::size_t trial);

/// Runs ALS from perturb(u0, c) towards T0 for every (c, trial).
[[nodiscard]] TrapExperimentResult run_trap_experiment(const TrapExperimentConfig& config);

/// Runs a single trap trial; exposed for tests and the CLI.
[[nodiscard]] TrapTrial run_trap_trial(const TrapExperimentConfig& config, std::size_t c_index,
                                       std::size_t trial);

void write_trap_csv(std::ostream& out, const TrapExperimentConfig& config,
                    const TrapExperimentResult& result, bool per_trial = false);

/// Distribution of the bond-r point w behind the target T = tau(w).
enum class OneLoopTarget {
  /// Every core entry i.i.d. standard normal. The fibers of w span at most
  /// r^2 dimensions per mode, so T is an orthogonal rotation of a target
  /// from the restricted set.
  gaussian,
  /// Standard normal on fiber positions 1..r^2 and zero beyond (random_w_cores).
  restricted,
};

[[nodiscard]] const char* to_string(OneLoopTarget target);

struct OneLoopExperimentConfig {
  std::size_t d = 3;
  std::size_t r = 3;
  std::size_t n = 10;
  /// Empty means {r^{d-1}, r^{d-1} - 1}.
  std::vector<std::size_t> m_values;
  std::size_t trials = 20;
  OneLoopTarget target = OneLoopTarget::gaussian;
  std::uint64_t base_seed = 0;
  double rank_tol = kDefaultRankTolerance;
  std::size_t threads = 1;

  [[nodiscard]] std::vector<std::size_t> resolved_m_values() const;
  void validate() const;
};

struct OneLoopRecord {
  std::size_t m = 0;
  std::size_t trial = 0;
  double f_u1 = 0.0;
  double min_sigma_min = 0.0;
  std::size_t rank_deficient_steps = 0;
  bool failed = false;
  std::string error;
};

struct OneLoopSummary {
  std::size_t m = 0;
  std::size_t trials = 0;
  std::size_t failures = 0;
  double max_f = 0.0;
  double min_f = 0.0;
  double min_sigma_min = 0.0;
};

struct OneLoopExperimentResult {
  std::vector<OneLoopRecord> records;  // ordered by (m index, trial)
  std::vector<OneLoopSummary> summaries;
};

/// Per trial: T = tau(w) for a random bond-r point w drawn per config.target
/// (shared across the m values of that trial), Gaussian start of bond m, one ALS loop.
[[nodiscard]] OneLoopExperimentResult run_oneloop_experiment(const OneLoopExperimentConfig& config);

[[nodiscard]] OneLoopRecord run_oneloop_trial(const OneLoopExperimentConfig& config,
                                              std::size_t m_index, std::size_t trial);

void write_oneloop_csv(std::ostream& out, const OneLoopExperimentConfig& config,
                       const OneLoopExperimentResult& result);

}  // namespace trdecomp
