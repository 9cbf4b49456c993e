#include "cli.hpp"

#include <algorithm>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "trdecomp/als.hpp"
#include "trdecomp/constructions.hpp"
#include "trdecomp/errors.hpp"
#include "trdecomp/experiments.hpp"
#include "trdecomp/text_io.hpp"
#include "trdecomp/verify.hpp"

namespace trdecomp {

namespace {

namespace fs = std::filesystem;

struct ConstructArgs {
  std::size_t d = 3;
  std::size_t r = 2;
  std::size_t n = 5;
  std::string out = ".";
};

struct AlsArgs {
  std::string target;
  std::string init;
  std::size_t m = 2;
  std::uint64_t seed = 0;
  std::size_t max_loops = AlsConfig{}.max_loops;
  double conv_tol = AlsConfig{}.conv_tol;
  double rank_tol = AlsConfig{}.rank_tol;
  std::string out;
};

struct TrapArgs {
  std::size_t d = 3;
  std::size_t r = 3;
  std::size_t n = 10;
  double c_min = 0.0;
  double c_max = 0.3;
  std::size_t c_steps = 16;
  std::size_t trials = 50;
  std::uint64_t seed = 0;
  std::size_t max_loops = AlsConfig{}.max_loops;
  double conv_tol = AlsConfig{}.conv_tol;
  double rank_tol = AlsConfig{}.rank_tol;
  double trap_epsilon = kDefaultTrapEpsilon;
  std::size_t threads = 1;
  std::string out;
  bool per_trial = false;
};

struct OneLoopArgs {
  std::size_t d = 3;
  std::size_t r = 3;
  std::size_t n = 10;
  std::vector<std::size_t> m;
  std::size_t trials = 20;
  OneLoopTarget target = OneLoopTarget::gaussian;
  std::uint64_t seed = 0;
  double rank_tol = kDefaultRankTolerance;
  std::size_t threads = 1;
  std::string out;
};

std::size_t default_threads() {
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string tag(std::size_t d, std::size_t r, std::size_t n) {
  return "_d" + std::to_string(d) + "_r" + std::to_string(r) + "_n" + std::to_string(n) + ".txt";
}

int run_construct(const ConstructArgs& a, std::ostream& out) {
  const SpuriousInstance inst = build_spurious_instance(a.d, a.r, a.n);
  const TRCores w = build_witness_w(a.d, a.r, a.n);
  const TRCores witness_u = build_witness_u(tau(w), a.d, a.r);

  const fs::path dir(a.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());

  const std::string suffix = tag(a.d, a.r, a.n);
  const fs::path t0 = dir / ("T0" + suffix);
  const fs::path u0 = dir / ("u0" + suffix);
  const fs::path wp = dir / ("w" + suffix);
  const fs::path up = dir / ("witness_u" + suffix);
  save_tensor(t0, inst.target);
  save_cores(u0, inst.local_min);
  save_cores(wp, w);
  save_cores(up, witness_u);
  for (const auto& p : {t0, u0, wp, up}) out << p.string() << '\n';
  return 0;
}

int run_als(const AlsArgs& a, std::ostream& out) {
  const DenseTensor target = load_tensor(a.target);
  const TRCores init = a.init.empty()
                           ? random_cores(target.order(), a.m, target.dims(), a.seed)
                           : load_cores(a.init);
  AlsConfig cfg;
  cfg.max_loops = a.max_loops;
  cfg.conv_tol = a.conv_tol;
  cfg.rank_tol = a.rank_tol;
  cfg.seed = a.seed;
  cfg.validate();

  const AlsTrace trace = als_loop(target, init, cfg);
  const std::size_t d = target.order();
  out << "# initial_objective=" << format_double(trace.initial_objective) << '\n';
  out << "loop,mode,objective,sigma_min,rank_deficient\n";
  for (std::size_t k = 0; k < trace.objectives.size(); ++k) {
    out << k / d + 1 << ',' << k % d + 1 << ',' << format_double(trace.objectives[k]) << ','
        << format_double(trace.sigma_mins[k]) << ',' << (trace.rank_deficient[k] ? 1 : 0) << '\n';
  }
  out << "# loops=" << trace.loops_run << " converged=" << (trace.converged ? 1 : 0)
      << " finite=" << (trace.finite ? 1 : 0)
      << " descent_violations=" << trace.descent_violations
      << " final_objective=" << format_double(trace.final_objective()) << '\n';
  if (!a.out.empty()) save_cores(a.out, trace.final_cores);
  return 0;
}

// Writes to the --out file when given, stdout otherwise.
template <typename Writer>
void emit(const std::string& path, std::ostream& out, Writer&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw IoError("cannot open " + path + " for writing");
  write(file);
  if (!file) throw IoError("write failed: " + path);
}

int run_trap(const TrapArgs& a, std::ostream& out) {
  TrapExperimentConfig cfg;
  cfg.d = a.d;
  cfg.r = a.r;
  cfg.n = a.n;
  cfg.c_values = linspace(a.c_min, a.c_max, a.c_steps);
  cfg.trials_per_c = a.trials;
  cfg.als.max_loops = a.max_loops;
  cfg.als.conv_tol = a.conv_tol;
  cfg.als.rank_tol = a.rank_tol;
  cfg.trap_epsilon = a.trap_epsilon;
  cfg.base_seed = a.seed;
  cfg.threads = a.threads;
  const TrapExperimentResult result = run_trap_experiment(cfg);
  emit(a.out, out, [&](std::ostream& s) { write_trap_csv(s, cfg, result, a.per_trial); });
  return 0;
}

int run_oneloop(const OneLoopArgs& a, std::ostream& out) {
  OneLoopExperimentConfig cfg;
  cfg.d = a.d;
  cfg.r = a.r;
  cfg.n = a.n;
  cfg.m_values = a.m;
  cfg.trials = a.trials;
  cfg.target = a.target;
  cfg.base_seed = a.seed;
  cfg.rank_tol = a.rank_tol;
  cfg.threads = a.threads;
  const OneLoopExperimentResult result = run_oneloop_experiment(cfg);
  emit(a.out, out, [&](std::ostream& s) { write_oneloop_csv(s, cfg, result); });
  return 0;
}

int run_verify(std::uint64_t seed, std::ostream& out) {
  bool all = true;
  for (const CheckResult& c : run_invariant_suite(seed)) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
    all = all && c.passed;
  }
  return all ? 0 : 1;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tensor ring ALS experiments", "trdecomp"};
  app.require_subcommand(1);

  ConstructArgs construct;
  auto* c = app.add_subcommand("construct", "Write T0, u0 and the witness cores to files");
  c->add_option("--d", construct.d, "Tensor order")->capture_default_str();
  c->add_option("--r", construct.r, "Base bond dimension")->capture_default_str();
  c->add_option("--n", construct.n, "External dimension")->capture_default_str();
  c->add_option("--out", construct.out, "Output directory")->capture_default_str();

  AlsArgs als;
  auto* a = app.add_subcommand("als", "Run ALS on a target tensor file and print the trace");
  a->add_option("--target", als.target, "Target tensor file")->required();
  a->add_option("--init", als.init, "Initial cores file (default: Gaussian cores of bond --m)");
  a->add_option("--m", als.m, "Bond dimension of a random start")->capture_default_str();
  a->add_option("--seed", als.seed, "Seed of a random start")->capture_default_str();
  a->add_option("--max-loops", als.max_loops)->capture_default_str();
  a->add_option("--conv-tol", als.conv_tol)->capture_default_str();
  a->add_option("--rank-tol", als.rank_tol)->capture_default_str();
  a->add_option("--out", als.out, "Write the final cores to this file");

  TrapArgs trap;
  trap.threads = default_threads();
  auto* t = app.add_subcommand("trap", "Perturbation sweep around the spurious minimum (CSV)");
  t->add_option("--d", trap.d)->capture_default_str();
  t->add_option("--r", trap.r)->capture_default_str();
  t->add_option("--n", trap.n)->capture_default_str();
  t->add_option("--c-min", trap.c_min)->capture_default_str();
  t->add_option("--c-max", trap.c_max)->capture_default_str();
  t->add_option("--c-steps", trap.c_steps)->capture_default_str();
  t->add_option("--trials", trap.trials, "Trials per perturbation size")->capture_default_str();
  t->add_option("--seed", trap.seed)->capture_default_str();
  t->add_option("--max-loops", trap.max_loops)->capture_default_str();
  t->add_option("--conv-tol", trap.conv_tol)->capture_default_str();
  t->add_option("--rank-tol", trap.rank_tol)->capture_default_str();
  t->add_option("--trap-epsilon", trap.trap_epsilon)->capture_default_str();
  t->add_option("--threads", trap.threads)->capture_default_str();
  t->add_option("--out", trap.out, "CSV file (default: stdout)");
  t->add_flag("--per-trial", trap.per_trial, "One row per trial instead of per c");

  OneLoopArgs oneloop;
  oneloop.threads = default_threads();
  auto* o = app.add_subcommand("oneloop", "One-loop convergence experiment (CSV)");
  o->add_option("--d", oneloop.d)->capture_default_str();
  o->add_option("--r", oneloop.r)->capture_default_str();
  o->add_option("--n", oneloop.n)->capture_default_str();
  o->add_option("--m", oneloop.m, "Bond dimensions (default: r^(d-1) and r^(d-1)-1)");
  o->add_option("--trials", oneloop.trials)->capture_default_str();
  const std::map<std::string, OneLoopTarget> targets{{"gaussian", OneLoopTarget::gaussian},
                                                     {"restricted", OneLoopTarget::restricted}};
  o->add_option("--target-set", oneloop.target,
                "Bond-r target point: gaussian (all entries) or restricted (first r^2 positions)")
      ->transform(CLI::CheckedTransformer(targets, CLI::ignore_case))
      ->default_str("gaussian");
  o->add_option("--seed", oneloop.seed)->capture_default_str();
  o->add_option("--rank-tol", oneloop.rank_tol)->capture_default_str();
  o->add_option("--threads", oneloop.threads)->capture_default_str();
  o->add_option("--out", oneloop.out, "CSV file (default: stdout)");

  std::uint64_t verify_seed = 0;
  auto* v = app.add_subcommand("verify", "Run the invariant self-check");
  v->add_option("--seed", verify_seed)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (c->parsed()) return run_construct(construct, out);
    if (a->parsed()) return run_als(als, out);
    if (t->parsed()) return run_trap(trap, out);
    if (o->parsed()) return run_oneloop(oneloop, out);
    return run_verify(verify_seed, out);
  } catch (const IoError& e) {
    err << "I/O error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace trdecomp
