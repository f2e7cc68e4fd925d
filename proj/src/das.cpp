#include "unimod/das.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace unimod {

PolarDecomposition polar_decompose(std::span<const cplx> v) {
  if (v.empty()) throw InvalidArgument("polar decomposition of an empty vector");
  PolarDecomposition pd;
  pd.magnitudes.resize(v.size());
  pd.angles.resize(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    pd.magnitudes[i] = std::abs(v[i]);
    if (pd.magnitudes[i] == 0.0) {
      pd.angles[i] = 0.0;
      pd.zero_mask.push_back(i);
    } else {
      pd.angles[i] = wrap_phase(std::arg(v[i]));
    }
  }
  return pd;
}

std::int64_t per_element_best(double psi, double tau, const DiscretePhaseSet& dps) {
  const double offset = wrap_phase(psi - tau + 0.5 * dps.step());
  return dps.reduce(static_cast<std::int64_t>(std::floor(offset / dps.step())));
}

std::int64_t RegionEncoding::shift(std::size_t region, std::size_t pos) const {
  const std::size_t n = order.size();
  const std::size_t crossed = region + 1;
  const auto full_turns = static_cast<std::int64_t>(crossed / n);
  return full_turns + (pos < crossed % n ? 1 : 0);
}

RegionEncoding encode_regions(const PolarDecomposition& pd, const DiscretePhaseSet& dps) {
  const std::size_t n = pd.magnitudes.size();
  const double step = dps.step();

  RegionEncoding enc;
  enc.reduced.resize(n, 0.0);
  enc.offsets.resize(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    if (pd.magnitudes[i] == 0.0) continue;
    double k = std::floor(pd.angles[i] / step);
    double rem = pd.angles[i] - k * step;
    if (rem >= step) {
      rem -= step;
      k += 1.0;
    } else if (rem < 0.0) {
      rem += step;
      k -= 1.0;
    }
    enc.reduced[i] = rem;
    enc.offsets[i] = dps.reduce(static_cast<std::int64_t>(k));
    enc.order.push_back(i);
  }
  if (enc.order.empty()) throw DegenerateInput("all entries are zero; every configuration is optimal");

  std::stable_sort(enc.order.begin(), enc.order.end(),
                   [&](std::size_t a, std::size_t b) { return enc.reduced[a] < enc.reduced[b]; });

  const std::size_t active = enc.order.size();
  const auto levels = static_cast<std::size_t>(dps.levels());
  enc.boundaries.reserve(active * levels);
  for (std::size_t turn = 0; turn < levels; ++turn) {
    for (std::size_t pos = 0; pos < active; ++pos) {
      enc.boundaries.push_back(enc.reduced[enc.order[pos]] + 0.5 * step +
                               static_cast<double>(turn) * step);
    }
  }
  return enc;
}

PhaseVector region_candidate(const RegionEncoding& enc, const PolarDecomposition& pd,
                             std::size_t region, const DiscretePhaseSet& dps) {
  std::vector<std::int64_t> idx(pd.magnitudes.size(), 0);
  for (std::size_t pos = 0; pos < enc.order.size(); ++pos) {
    const std::size_t i = enc.order[pos];
    idx[i] = dps.reduce(enc.shift(region, pos) - enc.offsets[i]);
  }
  return PhaseVector::on_lattice(std::move(idx), dps);
}

namespace {

// Walks the regions, calling visit(region, running_sum).
// Each boundary moves one element forward by one lattice step, so the sum
// changes by a single term. At the start of every turn all shifts agree and
// the sum is rebuilt from its closed form, which bounds the drift.
template <class Visit>
void sweep(const PolarDecomposition& pd, const RegionEncoding& enc, const DiscretePhaseSet& dps,
           Visit&& visit) {
  const std::size_t active = enc.order.size();
  const auto levels = static_cast<std::size_t>(dps.levels());

  std::vector<cplx> rot(levels);
  for (std::size_t k = 0; k < levels; ++k) rot[k] = std::polar(1.0, dps.phase(static_cast<std::int64_t>(k)));

  std::vector<cplx> base(active);
  cplx total{};
  for (std::size_t pos = 0; pos < active; ++pos) {
    const std::size_t i = enc.order[pos];
    base[pos] = std::polar(pd.magnitudes[i], enc.reduced[i]);
    total += base[pos];
  }

  // The all-zero region comes first, then regions 0, 1, ... in crossing order.
  const std::size_t last = active * levels - 1;
  visit(last, total);
  for (std::size_t turn = 0; turn < levels; ++turn) {
    const cplx delta = rot[(turn + 1) % levels] - rot[turn];
    cplx sum = rot[turn] * total;
    for (std::size_t pos = 0; pos < active; ++pos) {
      const std::size_t region = turn * active + pos;
      if (region == last) return;
      sum += base[pos] * delta;
      visit(region, sum);
    }
  }
}

constexpr double kTieTolerance = 1e-12;

}  // namespace

CandidateSet build_candidates(const PolarDecomposition& pd, const DiscretePhaseSet& dps) {
  const RegionEncoding enc = encode_regions(pd, dps);
  CandidateSet set;
  set.candidates.reserve(enc.region_count());
  set.objectives.reserve(enc.region_count());
  sweep(pd, enc, dps, [&](std::size_t region, cplx sum) {
    set.candidates.push_back(region_candidate(enc, pd, region, dps));
    set.objectives.push_back(std::abs(sum));
  });
  return set;
}

DasResult das_maximize(std::span<const cplx> v, const DiscretePhaseSet& dps) {
  // |<v, x>| = |sum conj(v_i) x_i|, so the sweep runs on the polar form of conj(v).
  ComplexVector w(v.begin(), v.end());
  for (cplx& a : w) a = std::conj(a);
  const PolarDecomposition pd = polar_decompose(w);
  const RegionEncoding enc = encode_regions(pd, dps);

  std::size_t best_region = 0;
  double best = -1.0;
  sweep(pd, enc, dps, [&](std::size_t region, cplx sum) {
    const double value = std::abs(sum);
    if (value > best + kTieTolerance) {
      best = value;
      best_region = region;
    }
  });

  DasResult out;
  out.phases = region_candidate(enc, pd, best_region, dps);
  const ComplexVector x = out.phases.unimodular();
  out.objective = std::abs(inner(v, x));
  return out;
}

}  // namespace unimod
