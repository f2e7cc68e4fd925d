#pragma once

// Shared domain types: the B-bit phase lattice, phase vectors, dense complex
// matrices, norms and the seeded random generator used by every experiment.

#include <complex>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace unimod {

using cplx = std::complex<double>;
using ComplexVector = std::vector<cplx>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Error hierarchy. The CLI maps these onto its exit-code contract.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct DegenerateInput : std::domain_error {
  using std::domain_error::domain_error;
};
struct SizeLimitExceeded : std::length_error {
  using std::length_error::length_error;
};
struct Unsupported : std::logic_error {
  using std::logic_error::logic_error;
};

enum class Norm { L1, L2, Inf };

std::string to_string(Norm p);
Norm parse_norm(const std::string& text);

// Hoelder conjugate: 1 <-> inf, 2 <-> 2.
Norm dual_of(Norm p);

/// The uniform lattice {0, step, ..., (levels-1)*step} with step = 2*pi/2^bits.
class DiscretePhaseSet {
 public:
  static constexpr int kMaxBits = 24;

  explicit DiscretePhaseSet(int bits);

  int bits() const { return bits_; }
  std::int64_t levels() const { return levels_; }
  double step() const { return step_; }

  // Radians of lattice index k; k must lie in [0, levels).
  double phase(std::int64_t k) const { return static_cast<double>(k) * step_; }

  // Reduces any integer into [0, levels).
  std::int64_t reduce(std::int64_t k) const { return k & (levels_ - 1); }

  bool operator==(const DiscretePhaseSet&) const = default;

 private:
  int bits_;
  std::int64_t levels_;
  double step_;
};

/// A phase configuration in [0, 2*pi)^n, optionally carrying the lattice
/// indices it was built from.
class PhaseVector {
 public:
  PhaseVector() = default;

  // Each value is wrapped into [0, 2*pi).
  static PhaseVector continuous(std::vector<double> radians);
  static PhaseVector on_lattice(std::vector<std::int64_t> indices, const DiscretePhaseSet& dps);
  static PhaseVector zeros(std::size_t n, const std::optional<DiscretePhaseSet>& dps);

  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  bool has_lattice() const { return indices_.has_value(); }
  const std::vector<std::int64_t>& indices() const;

  // e^{j*Omega}
  ComplexVector unimodular() const;

  bool operator==(const PhaseVector&) const = default;

 private:
  std::vector<double> values_;
  std::optional<std::vector<std::int64_t>> indices_;
};

/// Dense row-major complex matrix with finite entries.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols);
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  cplx operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const cplx> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }
  const std::vector<cplx>& data() const { return data_; }

  // A*x
  ComplexVector apply(std::span<const cplx> x) const;
  // A^H*z
  ComplexVector adjoint_apply(std::span<const cplx> z) const;

  bool operator==(const ComplexMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<cplx> data_;
};

/// xoshiro256** keyed by (seed, stream). The state is expanded with
/// splitmix64 so that nearby seeds and streams give unrelated sequences.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next();
  // Uniform on [0, 1) with 53 random bits.
  double uniform();
  // Uniform integer in [0, bound); bound > 0.
  std::uint64_t below(std::uint64_t bound);
  // Circularly-symmetric complex Gaussian with E|x|^2 = variance.
  cplx complex_gaussian(double variance);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t s_[4];
};

// Combines a list of integers into one stream id; used to give every
// (experiment, trial, size) its own generator.
std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts);

double wrap_phase(double theta);

// Signed circular difference a - b folded into (-pi, pi].
double circular_difference(double a, double b);

std::int64_t nearest_lattice(double theta, const DiscretePhaseSet& dps);

ComplexMatrix sample_complex_gaussian(Rng& rng, std::size_t m, std::size_t n, double variance);
ComplexVector sample_complex_gaussian_vector(Rng& rng, std::size_t n, double variance);

double norm_lp(std::span<const cplx> x, Norm p);

// <u, v> = u^H v
cplx inner(std::span<const cplx> u, std::span<const cplx> v);

}  // namespace unimod
