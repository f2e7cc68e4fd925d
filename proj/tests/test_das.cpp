#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "test_support.hpp"
#include "unimod/das.hpp"

namespace unimod {
namespace {

TEST(PolarDecompose, Examples) {
  const auto a = polar_decompose(ComplexVector{{1, 1}});
  EXPECT_NEAR(a.magnitudes[0], std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(a.angles[0], kPi / 4, 1e-15);
  EXPECT_TRUE(a.zero_mask.empty());

  const auto b = polar_decompose(ComplexVector{{0, 0}, {-2, 0}});
  EXPECT_EQ(b.magnitudes, (std::vector<double>{0.0, 2.0}));
  EXPECT_EQ(b.angles[0], 0.0);
  EXPECT_NEAR(b.angles[1], kPi, 1e-15);
  EXPECT_EQ(b.zero_mask, std::vector<std::size_t>{0});

  const auto c = polar_decompose(ComplexVector{{0, 1}});
  EXPECT_NEAR(c.angles[0], kPi / 2, 1e-15);
  EXPECT_THROW(polar_decompose(ComplexVector{}), InvalidArgument);
}

TEST(PolarDecompose, Reconstructs) {
  Rng rng(1);
  const ComplexVector v = testing::random_vector(rng, 200);
  const auto pd = polar_decompose(v);
  for (std::size_t i = 0; i < v.size(); ++i) {
    ASSERT_GE(pd.angles[i], 0.0);
    ASSERT_LT(pd.angles[i], kTwoPi);
    ASSERT_LE(std::abs(std::polar(pd.magnitudes[i], pd.angles[i]) - v[i]), 1e-12 * std::abs(v[i]));
  }
}

TEST(PerElementBest, Examples) {
  const DiscretePhaseSet b1(1), b2(2);
  EXPECT_EQ(per_element_best(0.0, 0.0, b1), 0);
  EXPECT_EQ(per_element_best(kPi, 0.0, b1), 1);
  // psi=0.3, tau=0.1: exhaustive over the four lattice phases.
  std::int64_t arg = 0;
  for (std::int64_t k = 1; k < 4; ++k) {
    if (std::cos(0.3 - (0.1 + b2.phase(k))) > std::cos(0.3 - (0.1 + b2.phase(arg)))) arg = k;
  }
  EXPECT_EQ(per_element_best(0.3, 0.1, b2), arg);
}

TEST(PerElementBest, EdgeBelongsToUpperRegion) {
  const DiscretePhaseSet b2(2);
  // Region of index 1 for tau=0 is [pi/4, 3pi/4).
  EXPECT_EQ(per_element_best(kPi / 4, 0.0, b2), 1);
  EXPECT_EQ(per_element_best(kPi / 4 - 1e-12, 0.0, b2), 0);
}

TEST(PerElementBest, MaximisesCosine) {
  Rng rng(2);
  for (int b = 1; b <= 4; ++b) {
    const DiscretePhaseSet dps(b);
    for (int t = 0; t < 2000; ++t) {
      const double psi = rng.uniform() * kTwoPi, tau = rng.uniform() * kTwoPi;
      const auto k = per_element_best(psi, tau, dps);
      for (std::int64_t other = 0; other < dps.levels(); ++other) {
        ASSERT_GE(std::cos(psi - tau - dps.phase(k)), std::cos(psi - tau - dps.phase(other)) - 1e-12);
      }
    }
  }
}

TEST(EncodeRegions, OrderIsStableSortOfReducedAngles) {
  const DiscretePhaseSet dps(1);
  // Angles pi/3 and pi/3 + pi reduce to the same remainder; index breaks the tie.
  const auto pd = polar_decompose(ComplexVector{std::polar(1.0, kPi / 3 + kPi), std::polar(1.0, 0.1),
                                                std::polar(1.0, kPi / 3)});
  const auto enc = encode_regions(pd, dps);
  EXPECT_EQ(enc.order, (std::vector<std::size_t>{1, 0, 2}));
  EXPECT_EQ(enc.offsets[0], 1);
  EXPECT_EQ(enc.offsets[2], 0);
  EXPECT_EQ(enc.region_count(), 6u);
  EXPECT_TRUE(std::is_sorted(enc.boundaries.begin(), enc.boundaries.end()));
}

TEST(BuildCandidates, SingleElementEnumeratesLattice) {
  const DiscretePhaseSet dps(2);
  const auto set = build_candidates(polar_decompose(ComplexVector{std::polar(1.0, 1.234)}), dps);
  ASSERT_EQ(set.candidates.size(), 4u);
  std::set<std::int64_t> seen;
  for (const auto& c : set.candidates) seen.insert(c.indices()[0]);
  EXPECT_EQ(seen, (std::set<std::int64_t>{0, 1, 2, 3}));
}

TEST(BuildCandidates, Cardinality) {
  Rng rng(3);
  const auto set = build_candidates(polar_decompose(testing::random_vector(rng, 100)), DiscretePhaseSet(2));
  EXPECT_EQ(set.candidates.size(), 400u);

  ComplexVector v = testing::random_vector(rng, 10);
  v[3] = 0.0;
  v[7] = 0.0;
  const auto sparse = build_candidates(polar_decompose(v), DiscretePhaseSet(3));
  EXPECT_EQ(sparse.candidates.size(), 8u * 8u);
  for (const auto& c : sparse.candidates) {
    EXPECT_EQ(c.indices()[3], 0);
    EXPECT_EQ(c.indices()[7], 0);
  }
}

// Distinct per-element patterns obtained by scanning psi on a dense grid.
std::set<std::vector<std::int64_t>> scan_patterns(const PolarDecomposition& pd, const DiscretePhaseSet& dps,
                                                  int grid) {
  std::set<std::vector<std::int64_t>> out;
  for (int g = 0; g < grid; ++g) {
    const double psi = kTwoPi * (g + 0.5) / grid;
    std::vector<std::int64_t> idx(pd.angles.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = per_element_best(psi, pd.angles[i], dps);
    out.insert(idx);
  }
  return out;
}

TEST(BuildCandidates, MatchesDensePsiScan) {
  const DiscretePhaseSet dps(1);
  const auto pd = polar_decompose(ComplexVector{std::polar(1.0, 0.0), std::polar(1.0, kPi / 3)});
  const auto set = build_candidates(pd, dps);
  ASSERT_EQ(set.candidates.size(), 4u);
  std::set<std::vector<std::int64_t>> built;
  for (const auto& c : set.candidates) built.insert(c.indices());
  EXPECT_EQ(built, scan_patterns(pd, dps, 100000));
}

TEST(BuildCandidates, MatchesDensePsiScanRandom) {
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 1 + rng.below(6);
    const DiscretePhaseSet dps(1 + static_cast<int>(rng.below(3)));
    const auto pd = polar_decompose(testing::random_vector(rng, n));
    const auto set = build_candidates(pd, dps);
    std::set<std::vector<std::int64_t>> built;
    for (const auto& c : set.candidates) built.insert(c.indices());
    EXPECT_EQ(built.size(), set.candidates.size());
    EXPECT_EQ(built, scan_patterns(pd, dps, 200000));
  }
}

TEST(BuildCandidates, IncrementalSumMatchesDirect) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 1 + rng.below(60);
    const DiscretePhaseSet dps(1 + static_cast<int>(rng.below(4)));
    const ComplexVector w = testing::random_vector(rng, n);
    const auto set = build_candidates(polar_decompose(w), dps);
    for (std::size_t c = 0; c < set.candidates.size(); ++c) {
      const ComplexVector x = set.candidates[c].unimodular();
      cplx direct{};
      for (std::size_t i = 0; i < n; ++i) direct += w[i] * x[i];
      ASSERT_NEAR(set.objectives[c], std::abs(direct), 1e-9);
      ASSERT_TRUE(testing::on_lattice_exactly(set.candidates[c], dps));
    }
  }
}

TEST(BuildCandidates, AllZeroIsDegenerate) {
  EXPECT_THROW(build_candidates(polar_decompose(ComplexVector(3)), DiscretePhaseSet(1)), DegenerateInput);
}

TEST(PiecewiseConstancy, PerElementBestConstantInsideRegion) {
  Rng rng(6);
  const DiscretePhaseSet dps(2);
  const auto pd = polar_decompose(testing::random_vector(rng, 5));
  const auto enc = encode_regions(pd, dps);
  for (std::size_t r = 0; r + 1 < enc.region_count(); ++r) {
    const double lo = enc.boundaries[r], hi = enc.boundaries[r + 1];
    if (hi - lo < 1e-9) continue;
    const auto expected = region_candidate(enc, pd, r, dps).indices();
    for (int s = 1; s < 50; ++s) {
      const double psi = lo + (hi - lo) * s / 50.0;
      for (std::size_t i = 0; i < pd.angles.size(); ++i) {
        ASSERT_EQ(per_element_best(psi, pd.angles[i], dps), expected[i]) << "region " << r;
      }
    }
  }
}

TEST(DasMaximize, Examples) {
  const DiscretePhaseSet dps(1);
  const auto a = das_maximize(ComplexVector{1.0, 1.0}, dps);
  EXPECT_EQ(a.phases.indices(), (std::vector<std::int64_t>{0, 0}));
  EXPECT_NEAR(a.objective, 2.0, 1e-12);

  const auto b = das_maximize(ComplexVector{1.0, -1.0}, dps);
  EXPECT_EQ(b.phases.indices(), (std::vector<std::int64_t>{0, 1}));
  EXPECT_NEAR(b.objective, 2.0, 1e-12);
}

TEST(DasMaximize, ThreeElementFrozenOptimum) {
  // Optimum from an independent brute force over all 8 configurations.
  const ComplexVector v{std::polar(1.0, 0.0), std::polar(2.0, 2 * kPi / 5), std::polar(1.0, 4 * kPi / 5)};
  const auto r = das_maximize(v, DiscretePhaseSet(1));
  EXPECT_NEAR(r.objective, 2.760078620030577, 1e-12);
  EXPECT_NEAR(r.objective, testing::naive_inner_max(v, 1), 1e-12);
}

TEST(DasMaximize, MatchesBruteForce) {
  Rng rng(7);
  for (int t = 0; t < 300; ++t) {
    const int bits = 1 + static_cast<int>(rng.below(3));
    const std::size_t n = 1 + rng.below(bits == 3 ? 6 : 9);
    ComplexVector v = testing::random_vector(rng, n);
    if (n > 2 && rng.below(4) == 0) v[rng.below(n)] = 0.0;
    const auto r = das_maximize(v, DiscretePhaseSet(bits));
    ASSERT_NEAR(r.objective, testing::naive_inner_max(v, bits), 1e-9) << "n=" << n << " B=" << bits;
    ASSERT_NEAR(r.objective, std::abs(inner(v, r.phases.unimodular())), 1e-12);
  }
}

TEST(DasMaximize, ScaleInvariance) {
  Rng rng(8);
  for (int t = 0; t < 200; ++t) {
    const ComplexVector v = testing::random_vector(rng, 1 + rng.below(30));
    const double c = 0.01 + 100.0 * rng.uniform();
    ComplexVector scaled = v;
    for (auto& x : scaled) x *= c;
    const DiscretePhaseSet dps(1 + static_cast<int>(rng.below(3)));
    const auto a = das_maximize(v, dps), b = das_maximize(scaled, dps);
    EXPECT_EQ(a.phases, b.phases);
    EXPECT_NEAR(b.objective, c * a.objective, 1e-9 * c * a.objective);
  }
}

TEST(DasMaximize, RotationCovariance) {
  Rng rng(9);
  for (int t = 0; t < 200; ++t) {
    const ComplexVector v = testing::random_vector(rng, 1 + rng.below(30));
    const cplx rot = std::polar(1.0, rng.uniform() * kTwoPi);
    ComplexVector rotated = v;
    for (auto& x : rotated) x *= rot;
    const DiscretePhaseSet dps(1 + static_cast<int>(rng.below(3)));
    EXPECT_NEAR(das_maximize(rotated, dps).objective, das_maximize(v, dps).objective, 1e-9);
  }
}

TEST(DasMaximize, ZeroEntriesGetPhaseZero) {
  const auto r = das_maximize(ComplexVector{0.0, {0, 1}, 0.0}, DiscretePhaseSet(2));
  EXPECT_EQ(r.phases.indices()[0], 0);
  EXPECT_EQ(r.phases.indices()[2], 0);
  EXPECT_NEAR(r.objective, 1.0, 1e-12);
  EXPECT_THROW(das_maximize(ComplexVector(4), DiscretePhaseSet(1)), DegenerateInput);
}

TEST(DasMaximize, EarliestCandidateWinsTies) {
  // Every candidate of a single real element with B=1 ties at |v|; the
  // all-zero-shift region is visited first.
  const auto r = das_maximize(ComplexVector{2.0}, DiscretePhaseSet(1));
  EXPECT_EQ(r.phases.indices(), std::vector<std::int64_t>{0});
}

}  // namespace
}  // namespace unimod
