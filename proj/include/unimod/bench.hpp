#pragma once

// Experiment harness: convergence traces, lifting statistics, SNR studies,
// quantization gap, timing and oracle cross-checks. Every trial draws its
// channels from its own (seed, experiment, trial) stream, so results do not
// depend on scheduling or thread count.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "unimod/core.hpp"

namespace unimod::bench {

enum class ExperimentKind { Convergence, LiftingStat, SnrVsN, SnrCdf, QuantizationGap, Timing, OracleCheck };

std::string to_string(ExperimentKind kind);
ExperimentKind parse_experiment(const std::string& name);
const std::vector<std::string>& experiment_names();

struct ExperimentSpec {
  ExperimentKind kind = ExperimentKind::Convergence;
  std::vector<std::size_t> rows;      // m, or M antennas for RIS studies
  std::vector<std::size_t> cols;      // n, or N reflecting elements
  std::vector<int> bits;
  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::vector<Norm> norms;
  std::uint64_t random_configs = 10000;
  std::size_t nmax = 8;               // oracle-check size ceiling
  double variance = 1.0;              // channel variance sigma^2
  std::string out_dir;                // empty: no files written
  unsigned threads = 0;               // 0: UNIMOD_THREADS or hardware default

  // Desk-scale defaults for each experiment.
  static ExperimentSpec defaults(ExperimentKind kind);
  void validate() const;
  nlohmann::json to_json() const;
};

// Worker count: explicit request, else UNIMOD_THREADS, else hardware.
unsigned resolve_threads(unsigned requested);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const CsvTable&) const = default;
};

// Shortest decimal that parses back to the same double.
std::string format_double(double x);
std::string emit_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text);

struct LiftingRecord {
  double unrounded = 0.0;
  double rounded = 0.0;
  double lifted = 0.0;
  std::optional<double> gain;  // undefined when the rounding loss is below 1e-12
};

LiftingRecord make_lifting_record(double unrounded, double rounded, double lifted);

// Median of the defined gains; empty when none are defined.
std::optional<double> median_gain(const std::vector<LiftingRecord>& records);

struct ExperimentResult {
  ExperimentSpec spec;
  CsvTable table;
  nlohmann::json results = nlohmann::json::array();
  std::vector<std::string> notes;
  std::string summary_line;
  bool ok = true;               // every internal property check held
};

// --- individual studies ----------------------------------------------------

struct ConvergenceRun {
  std::size_t trial = 0;
  std::string mode;   // continuous | discrete | lifted
  Norm norm = Norm::L2;
  std::vector<double> costs;
};

struct ConvergenceStudy {
  std::vector<ConvergenceRun> runs;
  std::size_t monotonicity_violations = 0;
};

ConvergenceStudy convergence_study(const ExperimentSpec& spec);

struct LiftingStudy {
  struct PerNorm {
    Norm norm = Norm::L2;
    std::vector<LiftingRecord> records;
    std::optional<double> median;
    double strict_improvement_fraction = 0.0;
    std::size_t dominance_violations = 0;
  };
  std::vector<PerNorm> per_norm;
};

LiftingStudy lifting_study(const ExperimentSpec& spec);

// SNR of the compared configurations for one RIS channel draw.
struct SnrTrial {
  std::size_t trial = 0;
  std::size_t elements = 0;
  int bits = 0;
  double proposed_db = 0.0;
  double rounded_db = 0.0;      // hard-rounded continuous solution
  double random_db = 0.0;       // best of random_configs lattice draws
  double unconfigured_db = 0.0; // all phases zero
};

struct SnrStudy {
  std::vector<SnrTrial> trials;
  struct PerN {
    std::size_t elements = 0;
    int bits = 0;
    double proposed_mean_db = 0.0;
    double rounded_mean_db = 0.0;
    double random_mean_db = 0.0;
    double unconfigured_mean_db = 0.0;
    std::size_t proposed_beats_random = 0;
    std::size_t proposed_below_rounded = 0;
    std::size_t count = 0;
  };
  std::vector<PerN> per_n;
};

SnrStudy snr_study(const ExperimentSpec& spec);

struct GapStudy {
  struct Row {
    std::size_t trial = 0;
    int bits = 0;
    double continuous_db = 0.0;
    double discrete_db = 0.0;
  };
  std::vector<Row> rows;
  struct PerBits {
    int bits = 0;
    double mean_gap_db = 0.0;
  };
  std::vector<PerBits> per_bits;
};

GapStudy quantization_gap_study(const ExperimentSpec& spec);

struct TimingStudy {
  struct Row {
    std::size_t elements = 0;
    std::string method;     // pipeline | random
    std::size_t trials = 0;
    double total_seconds = 0.0;
    double mean_objective = 0.0;
  };
  std::vector<Row> rows;
};

TimingStudy timing_study(const ExperimentSpec& spec);

struct OracleCheckStudy {
  struct Row {
    std::size_t trial = 0;
    std::string check;   // das | linf
    std::size_t m = 0;
    std::size_t n = 0;
    int bits = 0;
    double solver = 0.0;
    double exhaustive = 0.0;
    bool match = false;
    bool tie = false;      // objectives agree, configurations differ
  };
  std::vector<Row> rows;
  std::size_t das_passed = 0;
  std::size_t das_total = 0;
  std::size_t linf_passed = 0;
  std::size_t linf_total = 0;
  std::vector<nlohmann::json> mismatches;
};

OracleCheckStudy oracle_check_study(const ExperimentSpec& spec);

// Single cross-checks used by the study. A tie means the objectives agree but
// the configurations differ by more than a global lattice rotation.
OracleCheckStudy::Row check_das_instance(std::size_t trial, const ComplexVector& v, const DiscretePhaseSet& dps);
OracleCheckStudy::Row check_linf_instance(std::size_t trial, const ComplexMatrix& a, const DiscretePhaseSet& dps);

// --- dispatch ----------------------------------------------------------------

ExperimentResult run_convergence(const ExperimentSpec& spec);
ExperimentResult run_lifting_stat(const ExperimentSpec& spec);
ExperimentResult run_snr_vs_n(const ExperimentSpec& spec);
ExperimentResult run_snr_cdf(const ExperimentSpec& spec);
ExperimentResult run_quantization_gap(const ExperimentSpec& spec);
ExperimentResult run_timing(const ExperimentSpec& spec);
ExperimentResult run_oracle_check(const ExperimentSpec& spec);

ExperimentResult run_experiment(const ExperimentSpec& spec);

// {spec, git_like_version, results, notes}
nlohmann::json envelope(const ExperimentResult& result);

// Writes <out_dir>/<experiment>.csv and .json; no-op when out_dir is empty.
void write_result(const ExperimentResult& result);

std::string version_string();

}  // namespace unimod::bench
