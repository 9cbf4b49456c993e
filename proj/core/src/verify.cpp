#include "trdecomp/verify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <array>
#include <limits>
#include <string>

#include "trdecomp/als.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/experiments.hpp"
#include "trdecomp/random.hpp"
#include "trdecomp/text_io.hpp"
#include "trdecomp/unfolding.hpp"

namespace trdecomp {

namespace {

CheckResult verdict(std::string name, bool ok, std::string detail) {
  return {std::move(name), ok, std::move(detail)};
}

DenseTensor all_last(std::size_t d, std::size_t n) {
  DenseTensor e = indicator(n, n);
  DenseTensor out = e;
  for (std::size_t i = 1; i < d; ++i) out = outer(out, e);
  return out;
}

Eigen::MatrixXd random_gauge_matrix(std::size_t r, Rng& rng) {
  Eigen::MatrixXd g(r, r);
  for (Eigen::Index k = 0; k < g.size(); ++k) g.data()[k] = rng.normal();
  const Eigen::MatrixXd q = Eigen::HouseholderQR<Eigen::MatrixXd>(g).householderQ();
  Eigen::VectorXd scale(r);
  for (std::size_t k = 0; k < r; ++k) scale[k] = rng.uniform(1.0, 2.0);
  return q * scale.asDiagonal();
}

CheckResult spurious_value(std::uint64_t) {
  double worst = 0.0;
  bool exact = true;
  for (auto [d, r, n] : {std::array<std::size_t, 3>{3, 2, 5}, {4, 2, 5}, {3, 3, 10}}) {
    const auto inst = build_spurious_instance(d, r, n);
    worst = std::max(worst, std::abs(objective(inst.target, inst.local_min) - 0.5));
    exact = exact && tau(inst.local_min) == inst.target - all_last(d, n);
  }
  return verdict("spurious_minimum_value", worst == 0.0 && exact,
                 "max |f - 1/2| = " + format_double(worst) +
                     (exact ? ", tau(u0) = T0 - e_n^d exactly" : ", tau(u0) mismatch"));
}

CheckResult tau_entries(std::uint64_t seed) {
  const Shape dims{3, 4, 2, 3};
  const TRCores u = random_cores(4, 3, dims, seed);
  const DenseTensor t = tau(u);
  double worst = 0.0;
  for (std::size_t k = 0; k < t.size(); ++k) {
    const auto x = pi_inv(k + 1, dims);
    worst = std::max(worst, std::abs(tau_entry(u, x) - t[k]));
  }
  return verdict("tau_entry_consistency", worst <= 1e-12, "max diff " + format_double(worst));
}

CheckResult gauge(std::uint64_t seed) {
  Rng rng(derive_seed(seed, {1}));
  double worst = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const TRCores u = random_cores(3, 3, Shape{3, 3, 3}, derive_seed(seed, {2, std::uint64_t(trial)}));
    GaugeTuple g;
    for (int i = 0; i < 3; ++i) g.matrices.push_back(random_gauge_matrix(3, rng));
    const DenseTensor t = tau(u);
    const double diff = fnorm(tau(gauge_transform(u, g)) - t) / std::max(1.0, fnorm(t));
    worst = std::max(worst, diff);
  }
  return verdict("gauge_invariance", worst <= 1e-9, "max relative diff " + format_double(worst));
}

CheckResult unfolding(std::uint64_t seed) {
  const TRCores u = random_cores(4, 2, Shape{2, 3, 4, 2}, seed);
  const DenseTensor t = tau(u);
  double worst = 0.0;
  for (std::size_t i = 1; i <= 4; ++i) {
    const Mode mode(i);
    const Eigen::MatrixXd lhs = alpha(u, mode) * gamma(u.core(mode.offset()));
    worst = std::max(worst, (lhs - unfold_target(t, mode)).cwiseAbs().maxCoeff());
  }
  return verdict("unfolding_consistency", worst <= 1e-12, "max |A_i X_i - B_i| " + format_double(worst));
}

CheckResult descent(std::uint64_t seed) {
  std::size_t violations = 0;
  AlsConfig cfg;
  cfg.max_loops = 20;
  for (std::uint64_t trial = 0; trial < 10; ++trial) {
    const std::size_t d = 3 + trial % 2;
    const Shape dims(d, 3);
    const DenseTensor target = tau(random_cores(d, 2, dims, derive_seed(seed, {3, trial})));
    const TRCores start = random_cores(d, 2 + trial % 3, dims, derive_seed(seed, {4, trial}));
    violations += als_loop(target, start, cfg).descent_violations;
  }
  return verdict("monotone_descent", violations == 0,
                 std::to_string(violations) + " violations over 10 runs");
}

CheckResult local_min(std::uint64_t seed) {
  const auto inst = build_spurious_instance(3, 2, 5);
  double lowest = std::numeric_limits<double>::infinity();
  for (std::uint64_t s = 0; s < 1000; ++s) {
    const TRCores v = perturb(inst.local_min, 1e-3, derive_seed(seed, {5, s}));
    lowest = std::min(lowest, objective(inst.target, v));
  }
  return verdict("local_minimum_sampling", lowest >= 0.5 - 1e-12,
                 "min objective over 1000 samples " + format_double(lowest));
}

CheckResult witnesses(std::uint64_t seed) {
  bool identity = true;
  for (std::size_t d : {3, 4}) {
    const DenseTensor t = tau(build_witness_w(d, 2, 4));
    for (std::size_t j = 1; j < d; ++j) {
      const Eigen::MatrixXd m = reshape_tj(t, j, 2);
      identity = identity && m == Eigen::MatrixXd::Identity(m.rows(), m.cols());
    }
  }
  const DenseTensor t = tau(random_w_cores(3, 2, Shape(3, 4), seed));
  const double err = fnorm(tau(build_witness_u(t, 3, 2)) - t);
  return verdict("witness_identities", identity && err <= 1e-10,
                 std::string(identity ? "reshaped witness is the identity" : "reshape mismatch") +
                     ", witness reconstruction error " + format_double(err));
}

CheckResult oneloop(std::uint64_t seed) {
  OneLoopExperimentConfig cfg;
  cfg.d = 3;
  cfg.r = 2;
  cfg.n = 4;
  cfg.trials = 5;
  cfg.base_seed = seed;
  const auto result = run_oneloop_experiment(cfg);
  const auto& full = result.summaries.at(0);
  const auto& under = result.summaries.at(1);
  const bool ok = full.failures == 0 && full.max_f <= 1e-10 && under.min_f > 1e-6;
  return verdict("one_loop_convergence", ok,
                 "m=" + std::to_string(full.m) + " max f " + format_double(full.max_f) + ", m=" +
                     std::to_string(under.m) + " min f " + format_double(under.min_f));
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed) {
  const std::vector<std::pair<const char*, CheckResult (*)(std::uint64_t)>> checks{
      {"spurious_minimum_value", spurious_value}, {"tau_entry_consistency", tau_entries},
      {"gauge_invariance", gauge},                {"unfolding_consistency", unfolding},
      {"monotone_descent", descent},              {"local_minimum_sampling", local_min},
      {"witness_identities", witnesses},          {"one_loop_convergence", oneloop},
  };
  std::vector<CheckResult> results;
  for (const auto& [name, check] : checks) {
    try {
      results.push_back(check(seed));
    } catch (const std::exception& e) {
      results.push_back(verdict(name, false, std::string("threw: ") + e.what()));
    }
  }
  return results;
}

}  // namespace trdecomp
