#include "unimod/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <thread>
#include <vector>

namespace unimod {

namespace {

std::vector<cplx> lattice_rotations(const DiscretePhaseSet& dps) {
  std::vector<cplx> rot(static_cast<std::size_t>(dps.levels()));
  for (std::size_t k = 0; k < rot.size(); ++k) rot[k] = std::polar(1.0, dps.phase(static_cast<std::int64_t>(k)));
  return rot;
}

std::vector<std::int64_t> digits_of(std::uint64_t code, std::size_t count, std::uint64_t levels) {
  std::vector<std::int64_t> d(count);
  for (std::size_t t = count; t-- > 0;) {
    d[t] = static_cast<std::int64_t>(code % levels);
    code /= levels;
  }
  return d;
}

struct Best {
  double value = -1.0;
  std::uint64_t index = 0;
};

// Enumerates every configuration of a (m x n) in lexicographic order. The
// trailing `tail` entries are tabulated once; each configuration is then
// prefix_sum + tail_sum, computed the same way whatever the partitioning.
Best enumerate(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p, unsigned threads) {
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const auto levels = static_cast<std::uint64_t>(dps.levels());
  const std::vector<cplx> rot = lattice_rotations(dps);

  std::size_t tail = 0;
  std::uint64_t tail_count = 1;
  while (tail < n && tail_count * levels <= 4096) {
    ++tail;
    tail_count *= levels;
  }
  const std::size_t head = n - tail;
  std::uint64_t head_count = 1;
  for (std::size_t t = 0; t < head; ++t) head_count *= levels;

  std::vector<cplx> tail_sums(tail_count * m);
  for (std::uint64_t s = 0; s < tail_count; ++s) {
    const auto d = digits_of(s, tail, levels);
    for (std::size_t t = 0; t < tail; ++t) {
      for (std::size_t i = 0; i < m; ++i) {
        tail_sums[s * m + i] += a(i, head + t) * rot[static_cast<std::size_t>(d[t])];
      }
    }
  }

  auto scan = [&](std::uint64_t first, std::uint64_t last) {
    Best best;
    std::vector<cplx> prefix(m);
    std::vector<cplx> w(m);
    for (std::uint64_t h = first; h < last; ++h) {
      const auto d = digits_of(h, head, levels);
      std::fill(prefix.begin(), prefix.end(), cplx{});
      for (std::size_t j = 0; j < head; ++j) {
        for (std::size_t i = 0; i < m; ++i) prefix[i] += a(i, j) * rot[static_cast<std::size_t>(d[j])];
      }
      for (std::uint64_t s = 0; s < tail_count; ++s) {
        for (std::size_t i = 0; i < m; ++i) w[i] = prefix[i] + tail_sums[s * m + i];
        const double value = norm_lp(w, p);
        if (value > best.value) {
          best.value = value;
          best.index = h * tail_count + s;
        }
      }
    }
    return best;
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(
                                                                        std::min<std::uint64_t>(head_count, 1024))));
  std::vector<Best> partial(workers);
  if (workers == 1) {
    partial[0] = scan(0, head_count);
  } else {
    std::vector<std::thread> pool;
    for (unsigned wkr = 0; wkr < workers; ++wkr) {
      const std::uint64_t first = head_count * wkr / workers;
      const std::uint64_t last = head_count * (wkr + 1) / workers;
      pool.emplace_back([&, wkr, first, last] { partial[wkr] = scan(first, last); });
    }
    for (auto& t : pool) t.join();
  }
  // Chunks are in index order, so strict '>' keeps the lowest index on ties.
  Best best = partial[0];
  for (unsigned wkr = 1; wkr < workers; ++wkr) {
    if (partial[wkr].value > best.value) best = partial[wkr];
  }
  return best;
}

void check_budget(std::size_t n, const DiscretePhaseSet& dps) {
  if (n * static_cast<std::size_t>(dps.bits()) > static_cast<std::size_t>(kExhaustiveBitBudget)) {
    throw SizeLimitExceeded("exhaustive search limited to n*B <= " + std::to_string(kExhaustiveBitBudget) +
                            " (got n=" + std::to_string(n) + ", B=" + std::to_string(dps.bits()) + ")");
  }
}

OracleResult finish(const Best& best, std::size_t n, const DiscretePhaseSet& dps) {
  const auto levels = static_cast<std::uint64_t>(dps.levels());
  OracleResult out;
  out.best = PhaseVector::on_lattice(digits_of(best.index, n, levels), dps);
  out.objective = best.value;
  out.evaluated = std::uint64_t{1} << (n * static_cast<std::size_t>(dps.bits()));
  return out;
}

}  // namespace

OracleResult exhaustive_inner(std::span<const cplx> v, const DiscretePhaseSet& dps, unsigned threads) {
  if (v.empty()) throw InvalidArgument("exhaustive search over an empty vector");
  check_budget(v.size(), dps);
  std::vector<cplx> row(v.size());
  for (std::size_t j = 0; j < v.size(); ++j) row[j] = std::conj(v[j]);
  const ComplexMatrix a(1, v.size(), std::move(row));
  return finish(enumerate(a, dps, Norm::L2, threads), v.size(), dps);
}

OracleResult exhaustive_norm(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p, unsigned threads) {
  check_budget(a.cols(), dps);
  return finish(enumerate(a, dps, p, threads), a.cols(), dps);
}

OracleResult random_search(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p,
                           std::uint64_t trials, Rng& rng) {
  if (trials < 1) throw InvalidArgument("random search needs at least one trial");
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();
  const auto levels = static_cast<std::size_t>(dps.levels());
  const std::vector<cplx> rot = lattice_rotations(dps);

  // Column j rotated by every lattice phase: each draw is then a sum of n
  // table columns with no multiplications.
  std::vector<cplx> rotated(n * levels * m);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < levels; ++k) {
      for (std::size_t i = 0; i < m; ++i) rotated[(j * levels + k) * m + i] = a(i, j) * rot[k];
    }
  }

  std::vector<std::int64_t> draw(n);
  std::vector<std::int64_t> best_draw(n);
  std::vector<cplx> w(m);
  double best = -1.0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::fill(w.begin(), w.end(), cplx{});
    for (std::size_t j = 0; j < n; ++j) {
      draw[j] = static_cast<std::int64_t>(rng.below(levels));
      const cplx* col = rotated.data() + (j * levels + static_cast<std::size_t>(draw[j])) * m;
      for (std::size_t i = 0; i < m; ++i) w[i] += col[i];
    }
    const double value = norm_lp(w, p);
    if (value > best) {
      best = value;
      best_draw = draw;
    }
  }
  OracleResult out;
  out.best = PhaseVector::on_lattice(std::move(best_draw), dps);
  out.objective = best;
  out.evaluated = trials;
  return out;
}

}  // namespace unimod
