#include "unimod/core.hpp"

#include <algorithm>
#include <cmath>

namespace unimod {

std::string to_string(Norm p) {
  switch (p) {
    case Norm::L1: return "1";
    case Norm::L2: return "2";
    case Norm::Inf: return "inf";
  }
  return "?";
}

Norm parse_norm(const std::string& text) {
  if (text == "1") return Norm::L1;
  if (text == "2") return Norm::L2;
  if (text == "inf" || text == "Inf" || text == "INF") return Norm::Inf;
  throw InvalidArgument("norm must be one of 1, 2, inf (got '" + text + "')");
}

Norm dual_of(Norm p) {
  switch (p) {
    case Norm::L1: return Norm::Inf;
    case Norm::L2: return Norm::L2;
    case Norm::Inf: return Norm::L1;
  }
  return Norm::L2;
}

DiscretePhaseSet::DiscretePhaseSet(int bits) : bits_(bits) {
  if (bits < 1 || bits > kMaxBits) {
    throw InvalidArgument("phase resolution must be between 1 and " + std::to_string(kMaxBits) +
                          " bits");
  }
  levels_ = std::int64_t{1} << bits;
  step_ = kTwoPi / static_cast<double>(levels_);
}

PhaseVector PhaseVector::continuous(std::vector<double> radians) {
  PhaseVector out;
  for (double& r : radians) r = wrap_phase(r);
  out.values_ = std::move(radians);
  return out;
}

PhaseVector PhaseVector::on_lattice(std::vector<std::int64_t> indices, const DiscretePhaseSet& dps) {
  PhaseVector out;
  out.values_.resize(indices.size());
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i] < 0 || indices[i] >= dps.levels()) {
      throw InvalidArgument("lattice index out of range");
    }
    out.values_[i] = dps.phase(indices[i]);
  }
  out.indices_ = std::move(indices);
  return out;
}

PhaseVector PhaseVector::zeros(std::size_t n, const std::optional<DiscretePhaseSet>& dps) {
  if (dps) return on_lattice(std::vector<std::int64_t>(n, 0), *dps);
  return continuous(std::vector<double>(n, 0.0));
}

const std::vector<std::int64_t>& PhaseVector::indices() const {
  if (!indices_) throw InvalidArgument("phase vector is not lattice-indexed");
  return *indices_;
}

ComplexVector PhaseVector::unimodular() const {
  ComplexVector x(values_.size());
  for (std::size_t i = 0; i < values_.size(); ++i) x[i] = std::polar(1.0, values_[i]);
  return x;
}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : ComplexMatrix(rows, cols, std::vector<cplx>(rows * cols)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> row_major)
    : rows_(rows), cols_(cols), data_(std::move(row_major)) {
  if (rows == 0 || cols == 0) throw InvalidArgument("matrix dimensions must be positive");
  if (data_.size() != rows * cols) throw InvalidArgument("matrix data does not match its shape");
  for (const cplx& a : data_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw InvalidArgument("matrix entries must be finite");
    }
  }
}

ComplexVector ComplexMatrix::apply(std::span<const cplx> x) const {
  if (x.size() != cols_) throw InvalidArgument("A*x: length mismatch");
  ComplexVector y(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const cplx* a = data_.data() + i * cols_;
    cplx acc{};
    for (std::size_t j = 0; j < cols_; ++j) acc += a[j] * x[j];
    y[i] = acc;
  }
  return y;
}

ComplexVector ComplexMatrix::adjoint_apply(std::span<const cplx> z) const {
  if (z.size() != rows_) throw InvalidArgument("A^H*z: length mismatch");
  ComplexVector y(cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const cplx* a = data_.data() + i * cols_;
    const cplx zi = z[i];
    for (std::size_t j = 0; j < cols_; ++j) y[j] += std::conj(a[j]) * zi;
  }
  return y;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {
  std::uint64_t sm = seed;
  std::uint64_t key = splitmix64(sm);
  std::uint64_t st = stream ^ 0x6a09e667f3bcc909ULL;
  key ^= splitmix64(st);
  for (auto& s : s_) s = splitmix64(key);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("Rng::below: bound must be positive");
  if ((bound & (bound - 1)) == 0) return next() & (bound - 1);
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = max() - max() % bound;
  std::uint64_t r;
  do {
    r = next();
  } while (r >= limit);
  return r % bound;
}

cplx Rng::complex_gaussian(double variance) {
  // 1 - U lies in (0, 1], so the log is finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-variance * std::log(u1));
  return std::polar(r, kTwoPi * u2);
}

std::uint64_t stream_id(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (std::uint64_t p : parts) {
    std::uint64_t x = h ^ p;
    h = splitmix64(x);
  }
  return h;
}

double wrap_phase(double theta) {
  if (!std::isfinite(theta)) throw InvalidArgument("phase must be finite");
  double r = std::fmod(theta, kTwoPi);
  if (r < 0.0) r += kTwoPi;
  if (r >= kTwoPi) r = 0.0;
  return r;
}

double circular_difference(double a, double b) {
  double d = wrap_phase(a - b);
  if (d > kPi) d -= kTwoPi;
  return d;
}

std::int64_t nearest_lattice(double theta, const DiscretePhaseSet& dps) {
  const double x = wrap_phase(theta) / dps.step();
  const double fl = std::floor(x);
  const double below = x - fl;
  const double above = 1.0 - below;
  const std::int64_t lo = dps.reduce(static_cast<std::int64_t>(fl));
  const std::int64_t hi = dps.reduce(lo + 1);
  if (below < above) return lo;
  if (above < below) return hi;
  return std::min(lo, hi);
}

ComplexMatrix sample_complex_gaussian(Rng& rng, std::size_t m, std::size_t n, double variance) {
  if (!(variance > 0.0)) throw InvalidArgument("variance must be positive");
  std::vector<cplx> data(m * n);
  for (auto& a : data) a = rng.complex_gaussian(variance);
  return ComplexMatrix(m, n, std::move(data));
}

ComplexVector sample_complex_gaussian_vector(Rng& rng, std::size_t n, double variance) {
  if (!(variance > 0.0)) throw InvalidArgument("variance must be positive");
  ComplexVector v(n);
  for (auto& a : v) a = rng.complex_gaussian(variance);
  return v;
}

double norm_lp(std::span<const cplx> x, Norm p) {
  if (x.empty()) throw InvalidArgument("norm of an empty vector");
  double acc = 0.0;
  switch (p) {
    case Norm::L1:
      for (const cplx& a : x) acc += std::abs(a);
      return acc;
    case Norm::L2:
      for (const cplx& a : x) acc += std::norm(a);
      return std::sqrt(acc);
    case Norm::Inf:
      for (const cplx& a : x) acc = std::max(acc, std::abs(a));
      return acc;
  }
  return acc;
}

cplx inner(std::span<const cplx> u, std::span<const cplx> v) {
  if (u.size() != v.size()) throw InvalidArgument("inner product: length mismatch");
  cplx acc{};
  for (std::size_t i = 0; i < u.size(); ++i) acc += std::conj(u[i]) * v[i];
  return acc;
}

}  // namespace unimod
