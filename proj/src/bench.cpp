#include "unimod/bench.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "unimod/das.hpp"
#include "unimod/json_io.hpp"
#include "unimod/oracle.hpp"
#include "unimod/ris.hpp"
#include "unimod/solver.hpp"

#ifndef UNIMOD_VERSION
#define UNIMOD_VERSION "0.0.0"
#endif

namespace unimod::bench {

using nlohmann::json;

namespace {

struct KindInfo {
  ExperimentKind kind;
  const char* name;
};

constexpr KindInfo kKinds[] = {
    {ExperimentKind::Convergence, "convergence"},
    {ExperimentKind::LiftingStat, "lifting-stat"},
    {ExperimentKind::SnrVsN, "snr-vs-n"},
    {ExperimentKind::SnrCdf, "snr-cdf"},
    {ExperimentKind::QuantizationGap, "quantization-gap"},
    {ExperimentKind::Timing, "timing"},
    {ExperimentKind::OracleCheck, "oracle-check"},
};

std::uint64_t kind_id(ExperimentKind k) { return static_cast<std::uint64_t>(k) + 1; }

Rng trial_rng(const ExperimentSpec& spec, std::uint64_t trial, std::uint64_t extra = 0) {
  return Rng(spec.seed, stream_id({kind_id(spec.kind), trial, extra}));
}

// Runs body(i) for i in [0, count); body writes only to its own slot.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

bool non_decreasing(const std::vector<double>& costs) {
  for (std::size_t k = 1; k < costs.size(); ++k) {
    if (costs[k] < costs[k - 1] - 1e-9) return false;
  }
  return true;
}

std::string fmt_fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

std::string fmt_db(double x) { return fmt_fixed(x, 4); }

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? sep : std::string()) + parts[i];
  return out;
}

// True when b is a with every index shifted by one common lattice offset; such
// configurations always have the same objective.
bool same_up_to_rotation(const PhaseVector& a, const PhaseVector& b, const DiscretePhaseSet& dps) {
  const auto& x = a.indices();
  const auto& y = b.indices();
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (dps.reduce(x[i] - y[i]) != dps.reduce(x[0] - y[0])) return false;
  }
  return true;
}

std::string cell(std::size_t v) { return std::to_string(v); }
std::string cell(int v) { return std::to_string(v); }
std::string cell(double v) { return format_double(v); }

constexpr const char* kContinuousNote =
    "continuous reference: alternating continuous iteration (phase-alignment step), not a manifold solver";
constexpr const char* kChannelNote = "channels i.i.d. CN(0, sigma2); transmit power P = 1, noise variance 1";

}  // namespace

std::string to_string(ExperimentKind kind) {
  for (const auto& k : kKinds) {
    if (k.kind == kind) return k.name;
  }
  return "unknown";
}

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& k : kKinds) v.emplace_back(k.name);
    return v;
  }();
  return names;
}

ExperimentKind parse_experiment(const std::string& name) {
  for (const auto& k : kKinds) {
    if (name == k.name) return k.kind;
  }
  std::string valid;
  for (const auto& n : experiment_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw InvalidArgument("unknown experiment '" + name + "'; valid names: " + valid);
}

ExperimentSpec ExperimentSpec::defaults(ExperimentKind kind) {
  ExperimentSpec s;
  s.kind = kind;
  s.norms = {Norm::L1, Norm::L2};
  switch (kind) {
    case ExperimentKind::Convergence:
      s.rows = {10};
      s.cols = {100};
      s.bits = {2};
      s.trials = 1;
      break;
    case ExperimentKind::LiftingStat:
      s.rows = {10};
      s.cols = {100};
      s.bits = {1};
      s.trials = 500;
      break;
    case ExperimentKind::SnrVsN:
      s.rows = {32};
      s.cols = {50, 100, 200};
      s.bits = {1};
      s.trials = 100;
      s.norms = {Norm::L2};
      break;
    case ExperimentKind::SnrCdf:
      s.rows = {32};
      s.cols = {200};
      s.bits = {2};
      s.trials = 100;
      s.norms = {Norm::L2};
      break;
    case ExperimentKind::QuantizationGap:
      s.rows = {16};
      s.cols = {200};
      s.bits = {1, 2, 3, 4};
      s.trials = 100;
      s.norms = {Norm::L2};
      break;
    case ExperimentKind::Timing:
      s.rows = {32};
      s.cols = {10, 50, 100, 200, 500, 1000};
      s.bits = {1};
      s.trials = 100;
      s.random_configs = 1000;
      s.norms = {Norm::L2};
      break;
    case ExperimentKind::OracleCheck:
      s.rows = {6};
      s.cols = {8};
      s.bits = {1, 2, 3};
      s.trials = 1000;
      s.nmax = 8;
      s.norms = {Norm::Inf};
      break;
  }
  return s;
}

void ExperimentSpec::validate() const {
  if (trials < 1) throw InvalidArgument("trial count must be at least 1");
  if (rows.empty() || cols.empty()) throw InvalidArgument("dimension lists must be non-empty");
  for (auto d : rows) {
    if (d < 1) throw InvalidArgument("dimensions must be at least 1");
  }
  for (auto d : cols) {
    if (d < 1) throw InvalidArgument("dimensions must be at least 1");
  }
  if (bits.empty()) throw InvalidArgument("bits list must be non-empty");
  for (int b : bits) {
    if (b < 1 || b > DiscretePhaseSet::kMaxBits) throw InvalidArgument("bits out of range");
  }
  if (!(variance > 0.0)) throw InvalidArgument("channel variance must be positive");
  if (random_configs < 1) throw InvalidArgument("random-configs must be at least 1");
  if (kind == ExperimentKind::Convergence || kind == ExperimentKind::LiftingStat) {
    if (norms.empty()) throw InvalidArgument("norm list must be non-empty");
    for (Norm p : norms) {
      if (p == Norm::Inf) throw InvalidArgument("iterative studies support p = 1 and p = 2 only");
    }
  }
  if (kind == ExperimentKind::OracleCheck) {
    const int max_bits = *std::max_element(bits.begin(), bits.end());
    if (nmax < 1 || nmax * static_cast<std::size_t>(max_bits) > static_cast<std::size_t>(kExhaustiveBitBudget)) {
      throw InvalidArgument("oracle-check needs 1 <= nmax and nmax * bits <= " +
                            std::to_string(kExhaustiveBitBudget));
    }
  }
}

json ExperimentSpec::to_json() const {
  json j;
  j["experiment"] = to_string(kind);
  j["rows"] = rows;
  j["cols"] = cols;
  j["bits"] = bits;
  j["trials"] = trials;
  j["seed"] = seed;
  std::vector<std::string> ps;
  for (Norm p : norms) ps.push_back(unimod::to_string(p));
  j["norms"] = ps;
  j["random_configs"] = random_configs;
  j["nmax"] = nmax;
  j["variance"] = variance;
  return j;
}

unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("UNIMOD_THREADS")) {
    unsigned v = 0;
    const std::string_view text(env);
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec == std::errc() && ptr == text.data() + text.size() && v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

// --- CSV -----------------------------------------------------------------------

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

namespace {

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void emit_line(std::string& out, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out += ',';
    out += quote_csv(cells[i]);
  }
  out += '\n';
}

}  // namespace

std::string emit_csv(const CsvTable& table) {
  std::string out;
  emit_line(out, table.header);
  for (const auto& row : table.rows) emit_line(out, row);
  return out;
}

CsvTable parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> current;
  std::string field;
  bool quoted = false;
  bool line_has_content = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      line_has_content = true;
    } else if (c == ',') {
      current.push_back(std::move(field));
      field.clear();
      line_has_content = true;
    } else if (c == '\n') {
      current.push_back(std::move(field));
      field.clear();
      lines.push_back(std::move(current));
      current.clear();
      line_has_content = false;
    } else if (c != '\r') {
      field += c;
      line_has_content = true;
    }
  }
  if (quoted) throw ParseError("unterminated quoted CSV field");
  if (line_has_content) {
    current.push_back(std::move(field));
    lines.push_back(std::move(current));
  }
  CsvTable table;
  if (lines.empty()) return table;
  table.header = std::move(lines.front());
  table.rows.assign(std::make_move_iterator(lines.begin() + 1), std::make_move_iterator(lines.end()));
  return table;
}

// --- lifting records -------------------------------------------------------------

LiftingRecord make_lifting_record(double unrounded, double rounded, double lifted) {
  LiftingRecord r{unrounded, rounded, lifted, std::nullopt};
  const double loss = unrounded - rounded;
  if (loss >= 1e-12) r.gain = (lifted - rounded) / loss;
  return r;
}

std::optional<double> median_gain(const std::vector<LiftingRecord>& records) {
  std::vector<double> gains;
  for (const auto& r : records) {
    if (r.gain) gains.push_back(*r.gain);
  }
  if (gains.empty()) return std::nullopt;
  std::sort(gains.begin(), gains.end());
  const std::size_t mid = gains.size() / 2;
  return gains.size() % 2 ? gains[mid] : 0.5 * (gains[mid - 1] + gains[mid]);
}

// --- studies ---------------------------------------------------------------------

ConvergenceStudy convergence_study(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t m = spec.rows.front();
  const std::size_t n = spec.cols.front();
  const DiscretePhaseSet dps(spec.bits.front());
  const std::size_t per_trial = spec.norms.size() * 3;
  std::vector<ConvergenceRun> runs(spec.trials * per_trial);

  parallel_for(spec.trials, resolve_threads(spec.threads), [&](std::size_t t) {
    Rng rng = trial_rng(spec, t);
    const ComplexMatrix a = sample_complex_gaussian(rng, m, n, spec.variance);
    for (std::size_t k = 0; k < spec.norms.size(); ++k) {
      SolveConfig cfg;
      cfg.norm = spec.norms[k];
      cfg.dps = dps;
      const PhaseVector init = default_initializer(a, cfg.norm);
      SolveConfig ccfg = cfg;
      ccfg.dps.reset();
      const SolveTrace cont = solve_continuous(a, ccfg, init);
      const SolveTrace disc = solve_discrete(a, cfg, hard_round(init, dps));
      const SolveTrace lifted = lift(a, hard_round(cont.phases, dps), cfg);
      std::size_t base = t * per_trial + k * 3;
      runs[base + 0] = {t, "continuous", cfg.norm, cont.costs};
      runs[base + 1] = {t, "discrete", cfg.norm, disc.costs};
      runs[base + 2] = {t, "lifted", cfg.norm, lifted.costs};
    }
  });

  ConvergenceStudy study;
  study.runs = std::move(runs);
  for (const auto& r : study.runs) {
    if (!non_decreasing(r.costs)) ++study.monotonicity_violations;
  }
  return study;
}

LiftingStudy lifting_study(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t m = spec.rows.front();
  const std::size_t n = spec.cols.front();
  const DiscretePhaseSet dps(spec.bits.front());
  const std::size_t np = spec.norms.size();
  std::vector<LiftingRecord> records(spec.trials * np);

  parallel_for(spec.trials, resolve_threads(spec.threads), [&](std::size_t t) {
    Rng rng = trial_rng(spec, t);
    const ComplexMatrix a = sample_complex_gaussian(rng, m, n, spec.variance);
    for (std::size_t k = 0; k < np; ++k) {
      const PipelineResult res = default_pipeline(a, dps, spec.norms[k]);
      records[t * np + k] = make_lifting_record(res.unrounded_cost, res.rounded_cost, res.cost());
    }
  });

  LiftingStudy study;
  for (std::size_t k = 0; k < np; ++k) {
    LiftingStudy::PerNorm pn;
    pn.norm = spec.norms[k];
    std::size_t strict = 0;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const LiftingRecord& r = records[t * np + k];
      pn.records.push_back(r);
      if (r.lifted > r.rounded + 1e-12) ++strict;
      if (r.lifted < r.rounded - 1e-9) ++pn.dominance_violations;
    }
    pn.median = median_gain(pn.records);
    pn.strict_improvement_fraction = static_cast<double>(strict) / static_cast<double>(spec.trials);
    study.per_norm.push_back(std::move(pn));
  }
  return study;
}

SnrStudy snr_study(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t antennas = spec.rows.front();

  struct Job {
    std::size_t trial;
    std::size_t elements;
    int bits;
  };
  std::vector<Job> jobs;
  for (std::size_t n : spec.cols) {
    for (int b : spec.bits) {
      for (std::size_t t = 0; t < spec.trials; ++t) jobs.push_back({t, n, b});
    }
  }

  SnrStudy study;
  study.trials.resize(jobs.size());
  parallel_for(jobs.size(), resolve_threads(spec.threads), [&](std::size_t i) {
    const Job& job = jobs[i];
    // Channels depend on (trial, N) only, so every bit width sees the same draws.
    Rng rng = trial_rng(spec, job.trial, job.elements);
    const RisInstance inst = sample_ris_instance(rng, job.elements, antennas, false, spec.variance);
    const BeamformingProblem prob = build_problem(inst);
    const DiscretePhaseSet dps(job.bits);

    const PipelineResult res = default_pipeline(prob.A, dps, Norm::L2);
    Rng search_rng = trial_rng(spec, job.trial, stream_id({job.elements, static_cast<std::uint64_t>(job.bits)}));
    const OracleResult rnd = random_search(prob.A, dps, Norm::L2, spec.random_configs, search_rng);

    SnrTrial& out = study.trials[i];
    out.trial = job.trial;
    out.elements = job.elements;
    out.bits = job.bits;
    out.proposed_db = snr_from_objective(res.cost(), inst.transmit_power, inst.noise_variance).db;
    out.rounded_db = snr_from_objective(res.rounded_cost, inst.transmit_power, inst.noise_variance).db;
    out.random_db = snr_from_objective(rnd.objective, inst.transmit_power, inst.noise_variance).db;
    out.unconfigured_db = snr(prob, PhaseVector::zeros(job.elements, dps), inst).db;
  });

  std::map<std::pair<std::size_t, int>, std::vector<const SnrTrial*>> groups;
  for (const auto& t : study.trials) groups[{t.elements, t.bits}].push_back(&t);
  for (std::size_t n : spec.cols) {
    for (int b : spec.bits) {
      const auto& g = groups[{n, b}];
      SnrStudy::PerN pn;
      pn.elements = n;
      pn.bits = b;
      pn.count = g.size();
      std::vector<double> prop, rnd, rnd0, unc;
      for (const SnrTrial* t : g) {
        prop.push_back(t->proposed_db);
        rnd0.push_back(t->rounded_db);
        rnd.push_back(t->random_db);
        unc.push_back(t->unconfigured_db);
        if (t->proposed_db >= t->random_db) ++pn.proposed_beats_random;
        if (t->proposed_db < t->rounded_db - 1e-9) ++pn.proposed_below_rounded;
      }
      pn.proposed_mean_db = mean(prop);
      pn.rounded_mean_db = mean(rnd0);
      pn.random_mean_db = mean(rnd);
      pn.unconfigured_mean_db = mean(unc);
      study.per_n.push_back(pn);
    }
  }
  return study;
}

GapStudy quantization_gap_study(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t antennas = spec.rows.front();
  const std::size_t elements = spec.cols.front();
  const std::size_t nb = spec.bits.size();

  GapStudy study;
  study.rows.resize(spec.trials * nb);
  parallel_for(spec.trials, resolve_threads(spec.threads), [&](std::size_t t) {
    Rng rng = trial_rng(spec, t);
    const RisInstance inst = sample_ris_instance(rng, elements, antennas, false, spec.variance);
    const BeamformingProblem prob = build_problem(inst);
    SolveConfig cfg;
    cfg.norm = Norm::L2;
    const SolveTrace cont = continuous_pipeline(prob.A, cfg);
    const double cont_db = snr_from_objective(cont.final_cost(), inst.transmit_power, inst.noise_variance).db;
    for (std::size_t k = 0; k < nb; ++k) {
      // Same continuous point the full pipeline would produce; rounded and lifted per width.
      SolveConfig dcfg = cfg;
      dcfg.dps = DiscretePhaseSet(spec.bits[k]);
      const SolveTrace lifted = lift(prob.A, hard_round(cont.phases, *dcfg.dps), dcfg);
      study.rows[t * nb + k] = {t, spec.bits[k], cont_db,
                                snr_from_objective(lifted.final_cost(), inst.transmit_power, inst.noise_variance).db};
    }
  });

  for (std::size_t k = 0; k < nb; ++k) {
    std::vector<double> gaps;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      const auto& r = study.rows[t * nb + k];
      gaps.push_back(r.continuous_db - r.discrete_db);
    }
    study.per_bits.push_back({spec.bits[k], mean(gaps)});
  }
  return study;
}

TimingStudy timing_study(const ExperimentSpec& spec) {
  spec.validate();
  using clock = std::chrono::steady_clock;
  const std::size_t antennas = spec.rows.front();
  const DiscretePhaseSet dps(spec.bits.front());

  TimingStudy study;
  for (std::size_t n : spec.cols) {
    std::vector<BeamformingProblem> problems;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      Rng rng = trial_rng(spec, t, n);
      problems.push_back(build_problem(sample_ris_instance(rng, n, antennas, false, spec.variance)));
    }

    double objective_sum = 0.0;
    auto start = clock::now();
    for (const auto& prob : problems) objective_sum += default_pipeline(prob.A, dps, Norm::L2).cost();
    double seconds = std::chrono::duration<double>(clock::now() - start).count();
    study.rows.push_back({n, "pipeline", spec.trials, seconds, objective_sum / static_cast<double>(spec.trials)});

    objective_sum = 0.0;
    start = clock::now();
    for (std::size_t t = 0; t < problems.size(); ++t) {
      Rng search_rng = trial_rng(spec, t, stream_id({n, 1}));
      objective_sum += random_search(problems[t].A, dps, Norm::L2, spec.random_configs, search_rng).objective;
    }
    seconds = std::chrono::duration<double>(clock::now() - start).count();
    study.rows.push_back({n, "random", spec.trials, seconds, objective_sum / static_cast<double>(spec.trials)});
  }
  return study;
}

OracleCheckStudy::Row check_das_instance(std::size_t trial, const ComplexVector& v, const DiscretePhaseSet& dps) {
  const DasResult das = das_maximize(v, dps);
  const OracleResult ex = exhaustive_inner(v, dps);
  const bool match = std::abs(das.objective - ex.objective) <= 1e-9;
  return {trial, "das", 1, v.size(), dps.bits(), das.objective, ex.objective, match,
          match && !same_up_to_rotation(das.phases, ex.best, dps)};
}

OracleCheckStudy::Row check_linf_instance(std::size_t trial, const ComplexMatrix& a, const DiscretePhaseSet& dps) {
  const LinfResult lr = solve_linf(a, dps);
  const OracleResult ex = exhaustive_norm(a, dps, Norm::Inf);
  const bool match = std::abs(lr.objective - ex.objective) <= 1e-9;
  return {trial, "linf", a.rows(), a.cols(), dps.bits(), lr.objective, ex.objective, match,
          match && !same_up_to_rotation(lr.phases, ex.best, dps)};
}

OracleCheckStudy oracle_check_study(const ExperimentSpec& spec) {
  spec.validate();
  const std::size_t max_rows = std::min<std::size_t>(spec.rows.front(), 6);
  std::vector<int> linf_bits;
  for (int b : spec.bits) {
    if (b <= 2) linf_bits.push_back(b);
  }
  if (linf_bits.empty()) linf_bits.push_back(*std::min_element(spec.bits.begin(), spec.bits.end()));

  struct Outcome {
    OracleCheckStudy::Row das;
    OracleCheckStudy::Row linf;
    std::optional<json> das_dump;
    std::optional<json> linf_dump;
  };
  std::vector<Outcome> outcomes(spec.trials);

  parallel_for(spec.trials, resolve_threads(spec.threads), [&](std::size_t t) {
    Rng rng = trial_rng(spec, t);
    Outcome& o = outcomes[t];
    {
      const std::size_t n = 1 + rng.below(spec.nmax);
      const int b = spec.bits[rng.below(spec.bits.size())];
      const DiscretePhaseSet dps(b);
      const ComplexVector v = sample_complex_gaussian_vector(rng, n, spec.variance);
      o.das = check_das_instance(t, v, dps);
      if (!o.das.match) o.das_dump = json{{"check", "das"}, {"trial", t}, {"bits", b}, {"v", to_json(v)}};
    }
    {
      const std::size_t m = 1 + rng.below(max_rows);
      const std::size_t n = 1 + rng.below(spec.nmax);
      const int b = linf_bits[rng.below(linf_bits.size())];
      const DiscretePhaseSet dps(b);
      const ComplexMatrix a = sample_complex_gaussian(rng, m, n, spec.variance);
      o.linf = check_linf_instance(t, a, dps);
      if (!o.linf.match) o.linf_dump = json{{"check", "linf"}, {"trial", t}, {"bits", b}, {"A", to_json(a)}};
    }
  });

  OracleCheckStudy study;
  for (auto& o : outcomes) {
    study.rows.push_back(o.das);
    study.rows.push_back(o.linf);
    ++study.das_total;
    ++study.linf_total;
    if (o.das.match) ++study.das_passed;
    if (o.linf.match) ++study.linf_passed;
    if (o.das_dump) study.mismatches.push_back(std::move(*o.das_dump));
    if (o.linf_dump) study.mismatches.push_back(std::move(*o.linf_dump));
  }
  return study;
}

// --- results -----------------------------------------------------------------------

ExperimentResult run_convergence(const ExperimentSpec& spec) {
  const ConvergenceStudy study = convergence_study(spec);
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"trial", "mode", "p", "iter", "cost"};
  std::size_t longest = 0;
  for (const auto& run : study.runs) {
    longest = std::max(longest, run.costs.size() - 1);
    for (std::size_t k = 0; k < run.costs.size(); ++k) {
      r.table.rows.push_back({cell(run.trial), run.mode, to_string(run.norm), cell(k), cell(run.costs[k])});
    }
  }
  r.results.push_back({{"runs", study.runs.size()},
                       {"monotonicity_violations", study.monotonicity_violations},
                       {"max_iterations_used", longest}});
  r.notes = {kContinuousNote};
  r.ok = study.monotonicity_violations == 0;
  r.summary_line = "convergence: " + std::to_string(study.runs.size()) + " traces, " +
                   std::to_string(study.monotonicity_violations) + " monotonicity violations, longest " +
                   std::to_string(longest) + " iterations";
  return r;
}

ExperimentResult run_lifting_stat(const ExperimentSpec& spec) {
  const LiftingStudy study = lifting_study(spec);
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"trial", "p", "unrounded", "rounded", "lifted", "gain"};
  std::vector<std::string> parts;
  for (const auto& pn : study.per_norm) {
    for (std::size_t t = 0; t < pn.records.size(); ++t) {
      const auto& rec = pn.records[t];
      r.table.rows.push_back({cell(t), to_string(pn.norm), cell(rec.unrounded), cell(rec.rounded), cell(rec.lifted),
                              rec.gain ? cell(*rec.gain) : std::string()});
    }
    r.results.push_back({{"p", to_string(pn.norm)},
                         {"median_gain", pn.median ? json(*pn.median) : json(nullptr)},
                         {"strict_improvement_fraction", pn.strict_improvement_fraction},
                         {"dominance_violations", pn.dominance_violations}});
    r.ok = r.ok && pn.dominance_violations == 0;
    parts.push_back("p=" + to_string(pn.norm) + " median gain " +
                    (pn.median ? fmt_fixed(*pn.median, 4) : std::string("undefined")) + ", strict improvement " +
                    fmt_fixed(pn.strict_improvement_fraction, 3));
  }
  r.summary_line = "lifting-stat: " + join(parts, "; ");
  r.notes = {kContinuousNote, "relative gain = (lifted - rounded) / (unrounded - rounded)"};
  return r;
}

namespace {

ExperimentResult snr_result(const ExperimentSpec& spec, const SnrStudy& study) {
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"trial", "N", "bits", "method", "snr_db"};
  for (const auto& t : study.trials) {
    const std::pair<const char*, double> methods[] = {{"proposed", t.proposed_db},
                                                      {"rounded", t.rounded_db},
                                                      {"random", t.random_db},
                                                      {"unconfigured", t.unconfigured_db}};
    for (const auto& [name, db] : methods) {
      r.table.rows.push_back({cell(t.trial), cell(t.elements), cell(t.bits), name, fmt_db(db)});
    }
  }
  for (const auto& pn : study.per_n) {
    r.results.push_back({{"N", pn.elements},
                         {"bits", pn.bits},
                         {"proposed_mean_db", pn.proposed_mean_db},
                         {"rounded_mean_db", pn.rounded_mean_db},
                         {"random_mean_db", pn.random_mean_db},
                         {"unconfigured_mean_db", pn.unconfigured_mean_db},
                         {"proposed_beats_random", pn.proposed_beats_random},
                         {"proposed_below_rounded", pn.proposed_below_rounded},
                         {"trials", pn.count}});
    r.ok = r.ok && pn.proposed_below_rounded == 0;
  }
  r.notes = {kChannelNote, kContinuousNote,
             "random: best of " + std::to_string(spec.random_configs) + " uniform lattice configurations"};
  return r;
}

}  // namespace

ExperimentResult run_snr_vs_n(const ExperimentSpec& spec) {
  const SnrStudy study = snr_study(spec);
  ExperimentResult r = snr_result(spec, study);
  std::vector<std::string> parts;
  for (const auto& pn : study.per_n) {
    parts.push_back("N=" + std::to_string(pn.elements) + " B=" + std::to_string(pn.bits) + " proposed " +
                    fmt_db(pn.proposed_mean_db) + " dB (random " + fmt_db(pn.random_mean_db) + " dB)");
  }
  r.summary_line = "snr-vs-n: " + join(parts, "; ");
  return r;
}

ExperimentResult run_snr_cdf(const ExperimentSpec& spec) {
  const SnrStudy study = snr_study(spec);
  ExperimentResult r = snr_result(spec, study);
  // Empirical CDF per method, replacing the per-trial table.
  r.table.header = {"N", "bits", "method", "rank", "snr_db", "cdf"};
  r.table.rows.clear();
  for (const auto& pn : study.per_n) {
    std::vector<const SnrTrial*> group;
    for (const auto& t : study.trials) {
      if (t.elements == pn.elements && t.bits == pn.bits) group.push_back(&t);
    }
    const std::pair<const char*, double SnrTrial::*> methods[] = {{"proposed", &SnrTrial::proposed_db},
                                                                  {"rounded", &SnrTrial::rounded_db},
                                                                  {"random", &SnrTrial::random_db},
                                                                  {"unconfigured", &SnrTrial::unconfigured_db}};
    for (const auto& [name, field] : methods) {
      std::vector<double> xs;
      for (const SnrTrial* t : group) xs.push_back(t->*field);
      std::sort(xs.begin(), xs.end());
      for (std::size_t k = 0; k < xs.size(); ++k) {
        r.table.rows.push_back({cell(pn.elements), cell(pn.bits), name, cell(k + 1), fmt_db(xs[k]),
                                format_double(static_cast<double>(k + 1) / static_cast<double>(xs.size()))});
      }
    }
  }
  std::vector<std::string> parts;
  for (const auto& pn : study.per_n) {
    parts.push_back("N=" + std::to_string(pn.elements) + " B=" + std::to_string(pn.bits) +
                    " proposed beats random in " + std::to_string(pn.proposed_beats_random) + "/" +
                    std::to_string(pn.count));
  }
  r.summary_line = "snr-cdf: " + join(parts, "; ");
  return r;
}

ExperimentResult run_quantization_gap(const ExperimentSpec& spec) {
  const GapStudy study = quantization_gap_study(spec);
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"trial", "bits", "continuous_db", "discrete_db", "gap_db"};
  for (const auto& row : study.rows) {
    r.table.rows.push_back({cell(row.trial), cell(row.bits), fmt_db(row.continuous_db), fmt_db(row.discrete_db),
                            fmt_db(row.continuous_db - row.discrete_db)});
  }
  std::vector<std::string> parts;
  for (const auto& pb : study.per_bits) {
    r.results.push_back({{"bits", pb.bits}, {"mean_gap_db", pb.mean_gap_db}});
    parts.push_back("B=" + std::to_string(pb.bits) + " " + fmt_db(pb.mean_gap_db) + " dB");
  }
  r.summary_line = "quantization-gap: mean gap " + join(parts, "; ");
  r.notes = {kChannelNote, kContinuousNote};
  return r;
}

ExperimentResult run_timing(const ExperimentSpec& spec) {
  const TimingStudy study = timing_study(spec);
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"N", "method", "trials", "total_seconds", "mean_seconds", "mean_objective"};
  std::vector<std::string> parts;
  for (const auto& row : study.rows) {
    const double per = row.total_seconds / static_cast<double>(row.trials);
    r.table.rows.push_back({cell(row.elements), row.method, cell(row.trials), cell(row.total_seconds), cell(per),
                            cell(row.mean_objective)});
    r.results.push_back({{"N", row.elements},
                         {"method", row.method},
                         {"total_seconds", row.total_seconds},
                         {"mean_objective", row.mean_objective}});
    if (row.method == "pipeline") {
      parts.push_back("N=" + std::to_string(row.elements) + " " + fmt_fixed(per, 4) + " s");
    }
  }
  r.summary_line = "timing: pipeline per solve " + join(parts, "; ");
  r.notes = {"timings exclude channel generation and I/O",
             "random: best of " + std::to_string(spec.random_configs) + " configurations per trial"};
  return r;
}

ExperimentResult run_oracle_check(const ExperimentSpec& spec) {
  const OracleCheckStudy study = oracle_check_study(spec);
  ExperimentResult r;
  r.spec = spec;
  r.table.header = {"trial", "check", "m", "n", "bits", "solver", "exhaustive", "match", "tie"};
  std::size_t ties = 0;
  for (const auto& row : study.rows) {
    r.table.rows.push_back({cell(row.trial), row.check, cell(row.m), cell(row.n), cell(row.bits), cell(row.solver),
                            cell(row.exhaustive), row.match ? "1" : "0", row.tie ? "1" : "0"});
    if (row.tie) ++ties;
  }
  r.results.push_back({{"das_passed", study.das_passed},
                       {"das_total", study.das_total},
                       {"linf_passed", study.linf_passed},
                       {"linf_total", study.linf_total},
                       {"ties_flagged", ties},
                       {"mismatches", study.mismatches}});
  r.ok = study.das_passed == study.das_total && study.linf_passed == study.linf_total;
  r.summary_line = "oracle-check: das " + std::to_string(study.das_passed) + "/" + std::to_string(study.das_total) +
                   ", linf " + std::to_string(study.linf_passed) + "/" + std::to_string(study.linf_total) +
                   " passed, " + std::to_string(ties) + " ties flagged";
  if (!spec.out_dir.empty()) {
    std::filesystem::create_directories(spec.out_dir);
    for (const auto& m : study.mismatches) {
      const std::string name = "oracle_mismatch_" + m.at("check").get<std::string>() + "_" +
                               std::to_string(m.at("trial").get<std::size_t>()) + ".json";
      write_text_file((std::filesystem::path(spec.out_dir) / name).string(), m.dump(2) + "\n");
    }
  }
  return r;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::Convergence: return run_convergence(spec);
    case ExperimentKind::LiftingStat: return run_lifting_stat(spec);
    case ExperimentKind::SnrVsN: return run_snr_vs_n(spec);
    case ExperimentKind::SnrCdf: return run_snr_cdf(spec);
    case ExperimentKind::QuantizationGap: return run_quantization_gap(spec);
    case ExperimentKind::Timing: return run_timing(spec);
    case ExperimentKind::OracleCheck: return run_oracle_check(spec);
  }
  throw InvalidArgument("unknown experiment");
}

std::string version_string() { return std::string("unimod ") + UNIMOD_VERSION; }

json envelope(const ExperimentResult& result) {
  json j;
  j["spec"] = result.spec.to_json();
  j["git_like_version"] = version_string();
  j["results"] = result.results;
  j["notes"] = result.notes;
  return j;
}

void write_result(const ExperimentResult& result) {
  if (result.spec.out_dir.empty()) return;
  const std::filesystem::path dir(result.spec.out_dir);
  std::filesystem::create_directories(dir);
  const std::string stem = to_string(result.spec.kind);
  write_text_file((dir / (stem + ".csv")).string(), emit_csv(result.table));
  write_text_file((dir / (stem + ".json")).string(), envelope(result).dump(2) + "\n");
}

}  // namespace unimod::bench
