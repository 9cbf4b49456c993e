#include "trdecomp/als.hpp"

#include <algorithm>
#include <cmath>

#include "trdecomp/errors.hpp"

namespace trdecomp {

void AlsConfig::validate() const {
  if (max_loops == 0) throw DomainError("max_loops must be at least 1");
  if (!(conv_tol >= 0.0)) throw DomainError("conv_tol must be non-negative");
  if (!(rank_tol >= 0.0)) throw DomainError("rank_tol must be non-negative");
}

bool is_descent(double before, double after) {
  return after <= before + kDescentSlack * (1.0 + before);
}

double objective(const DenseTensor& target, const TRCores& u) {
  if (target.dims() != u.dims()) {
    throw DomainError("objective: target dims differ from the external dims of the cores");
  }
  const DenseTensor residual = target - tau(u);
  return 0.5 * inner(residual, residual);
}

MicrostepResult solve_microstep(const DenseTensor& target, const TRCores& u, Mode mode,
                                double rank_tol) {
  const LSProblem ls = build_ls_problem(target, u, mode);
  const DenseTensor& old = u.core(mode.offset());

  Eigen::BDCSVD<Eigen::MatrixXd> svd(ls.a_matrix, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::MatrixXd x = svd.solve(ls.b_matrix);

  MicrostepResult out;
  out.sigma_max = sigma.size() > 0 ? sigma(0) : 0.0;
  // A wide A_i has a nontrivial null space, so its smallest singular value is 0.
  out.sigma_min = (ls.a_matrix.rows() >= ls.a_matrix.cols() && sigma.size() > 0)
                      ? sigma(sigma.size() - 1)
                      : 0.0;
  out.rank_deficient = !(out.sigma_max > 0.0) || out.sigma_min <= rank_tol * out.sigma_max;
  out.core = gamma_inv(x, old.dim(0), old.dim(1), old.dim(2));
  // A_i gamma(u^i) is the unfolded tau(u), so this is exactly the new objective.
  out.objective_after = 0.5 * (ls.a_matrix * x - ls.b_matrix).squaredNorm();
  return out;
}

namespace {

AlsTrace run_loops(const DenseTensor& target, const TRCores& initial, const AlsConfig& config,
                   std::size_t max_loops) {
  config.validate();
  AlsTrace trace;
  trace.initial_objective = objective(target, initial);
  trace.final_cores = initial;
  TRCores& u = trace.final_cores;
  const std::size_t d = u.order();

  double loop_start = trace.initial_objective;
  double previous = trace.initial_objective;
  for (std::size_t loop = 0; loop < max_loops; ++loop) {
    for (std::size_t i = 1; i <= d; ++i) {
      MicrostepResult step = solve_microstep(target, u, Mode(i), config.rank_tol);
      u.set_core(i - 1, std::move(step.core));
      trace.objectives.push_back(step.objective_after);
      trace.sigma_mins.push_back(step.sigma_min);
      trace.rank_deficient.push_back(step.rank_deficient);
      if (!std::isfinite(step.objective_after)) trace.finite = false;
      if (!is_descent(previous, step.objective_after)) ++trace.descent_violations;
      previous = step.objective_after;
    }
    trace.loops_run = loop + 1;
    trace.loop_max_norms.push_back(max_norm(u));
    if (!trace.finite) break;
    if (loop_start - previous < config.conv_tol) {
      trace.converged = true;
      break;
    }
    loop_start = previous;
  }
  return trace;
}

}  // namespace

AlsTrace als_loop(const DenseTensor& target, const TRCores& initial, const AlsConfig& config) {
  return run_loops(target, initial, config, config.max_loops);
}

OneLoopResult one_loop(const DenseTensor& target, const TRCores& initial,
                       const AlsConfig& config) {
  OneLoopResult out;
  out.trace = run_loops(target, initial, config, 1);
  out.f_after = out.trace.final_objective();
  return out;
}

}  // namespace trdecomp
