#include "trdecomp/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>

#include "parallel.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/errors.hpp"
#include "trdecomp/random.hpp"
#include "trdecomp/text_io.hpp"

namespace trdecomp {

namespace {

constexpr std::uint64_t kTrapStream = 0x7472'6170;     // "trap"
constexpr std::uint64_t kTargetStream = 0x7461'7267;   // "targ"
constexpr std::uint64_t kInitStream = 0x696e'6974;     // "init"

std::size_t ipow(std::size_t base, std::size_t exp) {
  std::size_t v = 1;
  while (exp-- > 0) v *= base;
  return v;
}

}  // namespace

TRCores perturb(const TRCores& u, double c, std::uint64_t seed) {
  if (!(c >= 0.0)) throw DomainError("perturb: c must be non-negative");
  if (c == 0.0) return u;
  Rng rng(seed);
  std::vector<DenseTensor> cores = u.cores();
  for (auto& core : cores) {
    for (double& v : core.values()) v += rng.uniform(-c, c);
  }
  return TRCores(std::move(cores));
}

std::vector<double> linspace(double c_min, double c_max, std::size_t c_steps) {
  if (c_steps == 0) return {};
  if (c_steps == 1) return {c_min};
  std::vector<double> values(c_steps);
  for (std::size_t k = 0; k < c_steps; ++k) {
    values[k] = c_min + (c_max - c_min) * static_cast<double>(k) / static_cast<double>(c_steps - 1);
  }
  return values;
}

void TrapExperimentConfig::validate() const {
  if (c_values.empty()) throw DomainError("trap experiment: no perturbation sizes");
  for (double c : c_values) {
    if (!(c >= 0.0)) throw DomainError("trap experiment: perturbation sizes must be >= 0");
  }
  if (trials_per_c == 0) throw DomainError("trap experiment: trials per c must be >= 1");
  if (!(trap_epsilon >= 0.0)) throw DomainError("trap experiment: trap epsilon must be >= 0");
  als.validate();
}

const char* to_string(TrialOutcome outcome) {
  switch (outcome) {
    case TrialOutcome::trapped:
      return "trapped";
    case TrialOutcome::escaped:
      return "escaped";
    case TrialOutcome::failed:
      return "failed";
  }
  return "failed";
}

std::uint64_t trap_trial_seed(std::uint64_t base_seed, std::size_t c_index, std::size_t trial) {
  return derive_seed(base_seed, {kTrapStream, c_index, trial});
}

namespace {

TrapTrial trap_trial(const TrapExperimentConfig& config, const SpuriousInstance& instance,
                     const DenseTensor& tau_u0, double local_value, std::size_t c_index,
                     std::size_t trial) {
  TrapTrial out;
  out.c_index = c_index;
  out.trial = trial;
  out.c = config.c_values[c_index];
  try {
    const TRCores start =
        perturb(instance.local_min, out.c, trap_trial_seed(config.base_seed, c_index, trial));
    const AlsTrace trace = als_loop(instance.target, start, config.als);
    out.initial_objective = trace.initial_objective;
    out.final_objective = trace.final_objective();
    out.loops = trace.loops_run;
    out.converged = trace.converged;
    out.descent_violations = trace.descent_violations;
    if (!trace.finite || !std::isfinite(out.final_objective)) {
      out.outcome = TrialOutcome::failed;
      out.error = "non-finite objective";
      return out;
    }
    out.tau_distance = fnorm(tau(trace.final_cores) - tau_u0);
    out.outcome = out.final_objective >= local_value - config.trap_epsilon ? TrialOutcome::trapped
                                                                           : TrialOutcome::escaped;
  } catch (const std::exception& e) {
    out.outcome = TrialOutcome::failed;
    out.error = e.what();
  }
  return out;
}

}  // namespace

TrapTrial run_trap_trial(const TrapExperimentConfig& config, std::size_t c_index,
                         std::size_t trial) {
  config.validate();
  if (c_index >= config.c_values.size()) throw DomainError("run_trap_trial: c index out of range");
  const SpuriousInstance instance = build_spurious_instance(config.d, config.r, config.n);
  return trap_trial(config, instance, tau(instance.local_min),
                    objective(instance.target, instance.local_min), c_index, trial);
}

TrapExperimentResult run_trap_experiment(const TrapExperimentConfig& config) {
  config.validate();
  const SpuriousInstance instance = build_spurious_instance(config.d, config.r, config.n);
  const DenseTensor tau_u0 = tau(instance.local_min);
  const double local_value = objective(instance.target, instance.local_min);

  const std::size_t per_c = config.trials_per_c;
  TrapExperimentResult result;
  result.trials.resize(config.c_values.size() * per_c);
  detail::parallel_for(result.trials.size(), config.threads, [&](std::size_t k) {
    result.trials[k] = trap_trial(config, instance, tau_u0, local_value, k / per_c, k % per_c);
  });

  for (std::size_t ci = 0; ci < config.c_values.size(); ++ci) {
    TrapSummary s;
    s.c_index = ci;
    s.c = config.c_values[ci];
    s.trials = per_c;
    double sum = 0.0;
    for (std::size_t t = 0; t < per_c; ++t) {
      const TrapTrial& trial = result.trials[ci * per_c + t];
      switch (trial.outcome) {
        case TrialOutcome::trapped:
          ++s.trapped;
          break;
        case TrialOutcome::escaped:
          ++s.escaped;
          break;
        case TrialOutcome::failed:
          ++s.failed;
          break;
      }
      if (trial.outcome != TrialOutcome::failed) sum += trial.final_objective;
    }
    const std::size_t ok = s.trapped + s.escaped;
    s.mean_final_objective =
        ok == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(ok);
    result.summaries.push_back(s);
  }
  return result;
}

void write_trap_csv(std::ostream& out, const TrapExperimentConfig& config,
                    const TrapExperimentResult& result, bool per_trial) {
  out << "# trdecomp trap-experiment csv v1\n";
  out << "# d=" << config.d << " r=" << config.r << " n=" << config.n
      << " bond=" << ipow(config.r, config.d - 1) << " trials_per_c=" << config.trials_per_c
      << " c_values=" << config.c_values.size() << " seed=" << config.base_seed
      << " max_loops=" << config.als.max_loops << " conv_tol=" << format_double(config.als.conv_tol)
      << " rank_tol=" << format_double(config.als.rank_tol)
      << " trap_epsilon=" << format_double(config.trap_epsilon) << '\n';
  out << "# trapped iff final_objective >= 0.5 - trap_epsilon; stop when a loop lowers the "
         "objective by less than conv_tol or after max_loops\n";
  if (per_trial) {
    out << "c_index,c,trial,outcome,initial_objective,final_objective,tau_distance,loops,"
           "converged,descent_violations\n";
    for (const auto& t : result.trials) {
      out << t.c_index << ',' << format_double(t.c) << ',' << t.trial << ',' << to_string(t.outcome)
          << ',' << format_double(t.initial_objective) << ',' << format_double(t.final_objective)
          << ',' << format_double(t.tau_distance) << ',' << t.loops << ','
          << (t.converged ? 1 : 0) << ',' << t.descent_violations << '\n';
    }
    return;
  }
  out << "c_index,c,trials,trapped,escaped,failed,trap_fraction,mean_final_objective\n";
  for (const auto& s : result.summaries) {
    out << s.c_index << ',' << format_double(s.c) << ',' << s.trials << ',' << s.trapped << ','
        << s.escaped << ',' << s.failed << ',' << format_double(s.trap_fraction()) << ','
        << format_double(s.mean_final_objective) << '\n';
  }
}

const char* to_string(OneLoopTarget target) {
  return target == OneLoopTarget::restricted ? "restricted" : "gaussian";
}

std::vector<std::size_t> OneLoopExperimentConfig::resolved_m_values() const {
  if (!m_values.empty()) return m_values;
  const std::size_t full = ipow(r, d - 1);
  std::vector<std::size_t> values{full};
  if (full > 1) values.push_back(full - 1);
  return values;
}

void OneLoopExperimentConfig::validate() const {
  if (d < 2) throw DomainError("one-loop experiment: d must be at least 2");
  if (r < 1) throw DomainError("one-loop experiment: r must be positive");
  if (n < r * r) throw DomainError("one-loop experiment: n must be at least r^2");
  if (trials == 0) throw DomainError("one-loop experiment: trials must be >= 1");
  if (!(rank_tol >= 0.0)) throw DomainError("one-loop experiment: rank_tol must be >= 0");
  for (std::size_t m : resolved_m_values()) {
    if (m == 0) throw DomainError("one-loop experiment: bond dimensions must be >= 1");
  }
}

OneLoopRecord run_oneloop_trial(const OneLoopExperimentConfig& config, std::size_t m_index,
                                std::size_t trial) {
  const std::vector<std::size_t> ms = config.resolved_m_values();
  OneLoopRecord rec;
  rec.m = ms.at(m_index);
  rec.trial = trial;
  try {
    const Shape dims(config.d, config.n);
    const std::uint64_t target_seed = derive_seed(config.base_seed, {kTargetStream, trial});
    const TRCores w = config.target == OneLoopTarget::restricted
                          ? random_w_cores(config.d, config.r, dims, target_seed)
                          : random_cores(config.d, config.r, dims, target_seed);
    const DenseTensor target = tau(w);
    const TRCores start = random_cores(config.d, rec.m, dims,
                                       derive_seed(config.base_seed, {kInitStream, m_index, trial}));
    AlsConfig als;
    als.rank_tol = config.rank_tol;
    const OneLoopResult res = one_loop(target, start, als);
    rec.f_u1 = res.f_after;
    rec.min_sigma_min = *std::min_element(res.trace.sigma_mins.begin(), res.trace.sigma_mins.end());
    rec.rank_deficient_steps = static_cast<std::size_t>(
        std::count(res.trace.rank_deficient.begin(), res.trace.rank_deficient.end(), true));
    if (!res.trace.finite || !std::isfinite(rec.f_u1)) {
      rec.failed = true;
      rec.error = "non-finite objective";
    }
  } catch (const std::exception& e) {
    rec.failed = true;
    rec.error = e.what();
  }
  return rec;
}

OneLoopExperimentResult run_oneloop_experiment(const OneLoopExperimentConfig& config) {
  config.validate();
  const std::vector<std::size_t> ms = config.resolved_m_values();
  OneLoopExperimentResult result;
  result.records.resize(ms.size() * config.trials);
  detail::parallel_for(result.records.size(), config.threads, [&](std::size_t k) {
    result.records[k] = run_oneloop_trial(config, k / config.trials, k % config.trials);
  });

  for (std::size_t mi = 0; mi < ms.size(); ++mi) {
    OneLoopSummary s;
    s.m = ms[mi];
    s.trials = config.trials;
    s.max_f = -std::numeric_limits<double>::infinity();
    s.min_f = std::numeric_limits<double>::infinity();
    s.min_sigma_min = std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < config.trials; ++t) {
      const OneLoopRecord& rec = result.records[mi * config.trials + t];
      if (rec.failed) {
        ++s.failures;
        continue;
      }
      s.max_f = std::max(s.max_f, rec.f_u1);
      s.min_f = std::min(s.min_f, rec.f_u1);
      s.min_sigma_min = std::min(s.min_sigma_min, rec.min_sigma_min);
    }
    if (s.failures == s.trials) {
      s.max_f = s.min_f = s.min_sigma_min = std::numeric_limits<double>::quiet_NaN();
    }
    result.summaries.push_back(s);
  }
  return result;
}

void write_oneloop_csv(std::ostream& out, const OneLoopExperimentConfig& config,
                       const OneLoopExperimentResult& result) {
  out << "# trdecomp oneloop-experiment csv v1\n";
  out << "# d=" << config.d << " r=" << config.r << " n=" << config.n
      << " trials=" << config.trials << " target=" << to_string(config.target)
      << " seed=" << config.base_seed
      << " rank_tol=" << format_double(config.rank_tol) << '\n';
  out << "# kind=trial rows hold f(u_1) after one loop; kind=max/min rows summarize each m over "
         "non-failed trials (trial column = number of failures)\n";
  out << "kind,d,r,n,m,trial,f_u1,min_sigma_min,status\n";
  const auto prefix = [&](const char* kind, std::size_t m) {
    out << kind << ',' << config.d << ',' << config.r << ',' << config.n << ',' << m << ',';
  };
  for (const auto& rec : result.records) {
    prefix("trial", rec.m);
    out << rec.trial << ',' << format_double(rec.f_u1) << ',' << format_double(rec.min_sigma_min)
        << ',' << (rec.failed ? "failed" : "ok") << '\n';
  }
  for (const auto& s : result.summaries) {
    prefix("max", s.m);
    out << s.failures << ',' << format_double(s.max_f) << ',' << format_double(s.min_sigma_min)
        << ",ok\n";
    prefix("min", s.m);
    out << s.failures << ',' << format_double(s.min_f) << ',' << format_double(s.min_sigma_min)
        << ",ok\n";
  }
}

}  // namespace trdecomp
