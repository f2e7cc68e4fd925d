#include "unimod/cli.hpp"

#include <cmath>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "unimod/bench.hpp"
#include "unimod/json_io.hpp"
#include "unimod/oracle.hpp"
#include "unimod/ris.hpp"
#include "unimod/solver.hpp"

namespace unimod::cli {

using nlohmann::json;

namespace {

struct SolveFlags {
  std::string input;
  std::string p = "2";
  int bits = 1;
  double tol = 1e-10;
  int max_iter = 500;
  std::uint64_t seed = 0;
  int restarts = 1;
  std::string out;
};

struct OracleFlags {
  std::string input;
  std::string p = "2";
  int bits = 1;
  unsigned threads = 1;
  std::string out;
};

struct BenchFlags {
  std::string experiment;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> p;
  std::vector<int> bits;
  std::vector<std::size_t> m;
  std::vector<std::size_t> n;
  std::optional<std::size_t> nmax;
  std::optional<std::uint64_t> random_configs;
  std::optional<double> variance;
  unsigned threads = 0;
  std::string out;
};

double round_db(double db) { return std::round(db * 1e4) / 1e4; }

void emit(const json& doc, const std::string& path, std::ostream& out) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty()) {
    out << text;
  } else {
    write_text_file(path, text);
  }
}

json phases_json(const PhaseVector& phases) {
  json j;
  j["phases"] = phases.values();
  if (phases.has_lattice()) j["indices"] = phases.indices();
  return j;
}

SolveConfig solve_config(const SolveFlags& f, Norm p) {
  SolveConfig cfg;
  cfg.norm = p;
  if (f.bits < 0) throw InvalidArgument("--bits must be >= 0 (0 selects continuous phases)");
  if (f.bits > 0) cfg.dps = DiscretePhaseSet(f.bits);
  cfg.tolerance = f.tol;
  cfg.max_iterations = f.max_iter;
  cfg.seed = f.seed;
  cfg.restarts = f.restarts;
  cfg.validate();
  return cfg;
}

int cmd_solve(const SolveFlags& f, std::ostream& out) {
  const ComplexMatrix a = matrix_from_json(read_json_file(f.input));
  const Norm p = parse_norm(f.p);
  json doc;
  if (p == Norm::Inf) {
    if (f.bits < 1) throw InvalidArgument("p = inf needs a phase lattice (--bits >= 1)");
    const LinfResult r = solve_linf(a, DiscretePhaseSet(f.bits));
    doc = phases_json(r.phases);
    doc["objective"] = r.objective;
    doc["row"] = r.row;
    doc["trace"] = json::array({r.objective});
    doc["iterations"] = 0;
    doc["termination"] = to_string(Termination::Converged);
  } else {
    const SolveConfig cfg = solve_config(f, p);
    SolveTrace trace;
    if (cfg.dps) {
      PipelineResult r = default_pipeline(a, cfg);
      doc["unrounded_cost"] = r.unrounded_cost;
      doc["rounded_cost"] = r.rounded_cost;
      trace = std::move(r.lifted);
    } else {
      trace = continuous_pipeline(a, cfg);
    }
    doc.update(phases_json(trace.phases));
    doc["objective"] = trace.final_cost();
    doc["trace"] = trace.costs;
    doc["iterations"] = trace.iterations;
    doc["termination"] = to_string(trace.termination);
  }
  doc["p"] = to_string(p);
  doc["bits"] = f.bits;
  emit(doc, f.out, out);
  return kExitOk;
}

int cmd_solve_ris(const SolveFlags& f, std::ostream& out) {
  const RisInstance inst = ris_instance_from_json(read_json_file(f.input));
  const Norm p = parse_norm(f.p);
  if (p == Norm::Inf) throw InvalidArgument("solve-ris supports --p 1 or 2");
  const BeamformingProblem prob = build_problem(inst);
  const RisSolution sol = solve_ris(prob, solve_config(f, p));
  const Snr s = snr(prob, sol.phases, inst);
  json doc = phases_json(sol.phases);
  doc["objective"] = sol.objective;
  doc["snr_db"] = round_db(s.db);
  doc["snr_linear"] = s.linear;
  doc["augmented"] = prob.augmented;
  doc["bits"] = f.bits;
  emit(doc, f.out, out);
  return kExitOk;
}

int cmd_oracle(const OracleFlags& f, std::ostream& out) {
  const ComplexMatrix a = matrix_from_json(read_json_file(f.input));
  const Norm p = parse_norm(f.p);
  const OracleResult r = exhaustive_norm(a, DiscretePhaseSet(f.bits), p, std::max(1u, f.threads));
  json doc = phases_json(r.best);
  doc["objective"] = r.objective;
  doc["evaluated"] = r.evaluated;
  doc["p"] = to_string(p);
  doc["bits"] = f.bits;
  emit(doc, f.out, out);
  return kExitOk;
}

int cmd_bench(const BenchFlags& f, std::ostream& out) {
  bench::ExperimentSpec spec = bench::ExperimentSpec::defaults(bench::parse_experiment(f.experiment));
  if (f.trials) spec.trials = *f.trials;
  if (f.seed) spec.seed = *f.seed;
  if (!f.p.empty()) {
    spec.norms.clear();
    for (const auto& s : f.p) spec.norms.push_back(parse_norm(s));
  }
  if (!f.bits.empty()) spec.bits = f.bits;
  if (!f.m.empty()) spec.rows = f.m;
  if (!f.n.empty()) spec.cols = f.n;
  if (f.nmax) spec.nmax = *f.nmax;
  if (f.random_configs) spec.random_configs = *f.random_configs;
  if (f.variance) spec.variance = *f.variance;
  spec.threads = f.threads;
  spec.out_dir = f.out;
  spec.validate();

  const bench::ExperimentResult result = bench::run_experiment(spec);
  bench::write_result(result);
  out << result.summary_line << "\n";
  return result.ok ? kExitOk : kExitInternal;
}

void add_solve_flags(CLI::App& sub, SolveFlags& f, const std::string& what) {
  sub.add_option("input", f.input, what)->required();
  sub.add_option("--p", f.p, "norm: 1, 2 or inf")->capture_default_str();
  sub.add_option("--bits", f.bits, "phase resolution B (0 = continuous phases)")->capture_default_str();
  sub.add_option("--tol", f.tol, "stop when the cost changes by at most this")->capture_default_str();
  sub.add_option("--max-iter", f.max_iter, "iteration cap per alternating run")->capture_default_str();
  sub.add_option("--seed", f.seed, "seed for random restarts")->capture_default_str();
  sub.add_option("--restarts", f.restarts, "continuous starts (first deterministic, rest random)")
      ->capture_default_str();
  sub.add_option("--out", f.out, "write the JSON result to this file (default: stdout)");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Uni-modular norm maximisation: solvers, exhaustive oracle and experiments", "unimod"};
  app.require_subcommand(1, 1);

  SolveFlags solve_flags;
  auto* solve = app.add_subcommand("solve", "maximise ||A e^{jOmega}||_p for a matrix file");
  add_solve_flags(*solve, solve_flags, "JSON matrix: nested rows of [re, im] (or {\"A\": ...})");

  SolveFlags ris_flags;
  auto* solve_ris_cmd = app.add_subcommand("solve-ris", "optimise RIS phases for a channel instance");
  add_solve_flags(*solve_ris_cmd, ris_flags, "JSON RIS instance (H_ris_bs, h_ue_ris, h_d, P, sigma2)");

  OracleFlags oracle_flags;
  auto* oracle = app.add_subcommand("oracle", "exhaustive search over the phase lattice (n*B <= 24)");
  oracle->add_option("input", oracle_flags.input, "JSON matrix file")->required();
  oracle->add_option("--p", oracle_flags.p, "norm: 1, 2 or inf")->capture_default_str();
  oracle->add_option("--bits", oracle_flags.bits, "phase resolution B")->capture_default_str();
  oracle->add_option("--threads", oracle_flags.threads, "enumeration workers")->capture_default_str();
  oracle->add_option("--out", oracle_flags.out, "write the JSON result to this file (default: stdout)");

  BenchFlags bench_flags;
  auto* bench_cmd = app.add_subcommand("bench", "run an experiment and write CSV/JSON results");
  std::string names;
  for (const auto& n : bench::experiment_names()) names += (names.empty() ? "" : ", ") + n;
  bench_cmd->add_option("--experiment", bench_flags.experiment, "one of: " + names)->required();
  bench_cmd->add_option("--trials", bench_flags.trials, "trial count (default per experiment)");
  bench_cmd->add_option("--seed", bench_flags.seed, "base seed (default 1)");
  bench_cmd->add_option("--p", bench_flags.p, "norms, comma separated (default per experiment)")->delimiter(',');
  bench_cmd->add_option("--bits", bench_flags.bits, "bit widths, comma separated (default per experiment)")->delimiter(',');
  bench_cmd->add_option("--m", bench_flags.m, "rows / BS antennas, comma separated (default per experiment)")->delimiter(',');
  bench_cmd->add_option("--n", bench_flags.n, "columns / RIS elements, comma separated (default per experiment)")->delimiter(',');
  bench_cmd->add_option("--nmax", bench_flags.nmax, "oracle-check: largest n (default 8)");
  bench_cmd->add_option("--random-configs", bench_flags.random_configs,
                        "random-search draws per trial (default 10000; timing 1000)");
  bench_cmd->add_option("--variance", bench_flags.variance, "channel variance sigma^2 (default 1)");
  bench_cmd->add_option("--threads", bench_flags.threads, "worker threads (0 = UNIMOD_THREADS or hardware)")
      ->capture_default_str();
  bench_cmd->add_option("--out", bench_flags.out, "output directory for <experiment>.csv/.json (default: no files)");

  std::vector<std::string> argv_store{"unimod"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const auto& s : argv_store) argv.push_back(s.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (solve->parsed()) return cmd_solve(solve_flags, out);
    if (solve_ris_cmd->parsed()) return cmd_solve_ris(ris_flags, out);
    if (oracle->parsed()) return cmd_oracle(oracle_flags, out);
    if (bench_cmd->parsed()) return cmd_bench(bench_flags, out);
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const SizeLimitExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Unsupported& e) {
    err << "error: " << e.what() << "\n";
    return kExitParse;
  } catch (const DegenerateInput& e) {
    err << "error: degenerate input: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitInternal;
}

}  // namespace unimod::cli
