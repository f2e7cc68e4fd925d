#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"
#include "unimod/oracle.hpp"
#include "unimod/ris.hpp"

namespace unimod {
namespace {

// h^H diag(e^{j*Omega}) H + h_d^H evaluated term by term.
double direct_received_norm(const RisInstance& inst, const std::vector<cplx>& x) {
  double acc = 0.0;
  for (std::size_t m = 0; m < inst.antennas(); ++m) {
    cplx s = inst.h_d ? std::conj((*inst.h_d)[m]) : cplx{};
    for (std::size_t i = 0; i < inst.elements(); ++i) s += std::conj(inst.h_ue_ris[i]) * x[i] * inst.H_ris_bs(i, m);
    acc += std::norm(s);
  }
  return std::sqrt(acc);
}

PhaseVector random_phases(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = rng.uniform() * kTwoPi;
  return PhaseVector::continuous(std::move(v));
}

TEST(BuildPhi, UnitWeightsGiveH) {
  Rng rng(1);
  RisInstance inst = sample_ris_instance(rng, 4, 3, false);
  inst.h_ue_ris.assign(4, 1.0);
  EXPECT_EQ(build_phi(inst), inst.H_ris_bs);
}

TEST(BuildPhi, SelectorWeightKeepsOneRow) {
  Rng rng(2);
  RisInstance inst = sample_ris_instance(rng, 4, 3, false);
  inst.h_ue_ris.assign(4, 0.0);
  inst.h_ue_ris[0] = 1.0;
  const auto phi = build_phi(inst);
  for (std::size_t m = 0; m < 3; ++m) {
    EXPECT_EQ(phi(0, m), inst.H_ris_bs(0, m));
    for (std::size_t i = 1; i < 4; ++i) EXPECT_EQ(phi(i, m), cplx{});
  }
}

TEST(BuildPhi, RowScalingIdentity) {
  Rng rng(3);
  const RisInstance inst = sample_ris_instance(rng, 4, 3, false);
  const auto phi = build_phi(inst);
  const auto x = random_phases(rng, 4).unimodular();
  for (std::size_t m = 0; m < 3; ++m) {
    cplx via_phi{}, direct{};
    for (std::size_t i = 0; i < 4; ++i) {
      via_phi += x[i] * phi(i, m);
      direct += std::conj(inst.h_ue_ris[i]) * x[i] * inst.H_ris_bs(i, m);
    }
    EXPECT_NEAR(std::abs(via_phi - direct), 0.0, 1e-12);
  }
}

TEST(BuildPhi, DimensionMismatch) {
  Rng rng(4);
  RisInstance inst = sample_ris_instance(rng, 4, 3, true);
  inst.h_ue_ris.pop_back();
  EXPECT_THROW(build_phi(inst), InvalidArgument);
  inst = sample_ris_instance(rng, 4, 3, true);
  inst.h_d->push_back(1.0);
  EXPECT_THROW(build_problem(inst), InvalidArgument);
  inst = sample_ris_instance(rng, 4, 3, false);
  inst.transmit_power = 0.0;
  EXPECT_THROW(inst.validate(), InvalidArgument);
}

TEST(BuildProblem, Shapes) {
  Rng rng(5);
  const auto nlos = build_problem(sample_ris_instance(rng, 4, 3, false));
  EXPECT_FALSE(nlos.augmented);
  EXPECT_EQ(nlos.A.rows(), 3u);
  EXPECT_EQ(nlos.A.cols(), 4u);

  const RisInstance los_inst = sample_ris_instance(rng, 4, 3, true);
  const auto los = build_problem(los_inst);
  EXPECT_TRUE(los.augmented);
  EXPECT_EQ(los.A.rows(), 3u);
  EXPECT_EQ(los.A.cols(), 5u);
  EXPECT_EQ(los.elements(), 4u);
  for (std::size_t m = 0; m < 3; ++m) EXPECT_EQ(los.A(m, 4), std::conj((*los_inst.h_d)[m]));
}

TEST(BuildProblem, ReductionIdentity) {
  Rng rng(6);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 1 + rng.below(30), m = 1 + rng.below(6);
    const RisInstance inst = sample_ris_instance(rng, n, m, rng.below(2) == 1);
    const auto prob = build_problem(inst);
    const auto phases = random_phases(rng, n);
    const double direct = direct_received_norm(inst, phases.unimodular());
    EXPECT_NEAR(ris_objective(prob, phases), direct, 1e-12 * direct);
    EXPECT_NEAR(norm_lp(cascaded_channel(inst, phases), Norm::L2), direct, 1e-12 * direct);
  }
}

TEST(SolveRis, ZeroDirectLinkMatchesNlos) {
  Rng rng(7);
  for (int t = 0; t < 20; ++t) {
    RisInstance los = sample_ris_instance(rng, 12, 3, false);
    RisInstance nlos = los;
    los.h_d = ComplexVector(3, 0.0);
    SolveConfig cfg;
    cfg.dps = DiscretePhaseSet(2);
    const auto a = solve_ris(build_problem(los), cfg);
    const auto b = solve_ris(build_problem(nlos), cfg);
    EXPECT_NEAR(ris_objective(build_problem(nlos), a.phases), a.objective, 1e-9);
    // With h_d = 0 the auxiliary column contributes nothing, so both problems share
    // an optimum value; on small instances compare against enumeration.
    const double best = exhaustive_norm(build_problem(nlos).A, DiscretePhaseSet(2), Norm::L2).objective;
    EXPECT_LE(a.objective, best + 1e-9);
    EXPECT_LE(b.objective, best + 1e-9);
  }
  // Augmented optimum equals the NLoS optimum exactly when h_d = 0.
  RisInstance los = sample_ris_instance(rng, 6, 2, false);
  RisInstance nlos = los;
  los.h_d = ComplexVector(2, 0.0);
  const double aug = exhaustive_norm(build_problem(los).A, DiscretePhaseSet(1), Norm::L2).objective;
  const double plain = exhaustive_norm(build_problem(nlos).A, DiscretePhaseSet(1), Norm::L2).objective;
  EXPECT_NEAR(aug, plain, 1e-12);
}

TEST(Derotate, ZeroAuxiliaryIsPassThrough) {
  const DiscretePhaseSet dps(2);
  const auto aug = PhaseVector::on_lattice({1, 3, 2, 0}, dps);
  EXPECT_EQ(derotate(aug, dps).indices(), (std::vector<std::int64_t>{1, 3, 2}));
}

TEST(Derotate, PreservesObjectiveAndLattice) {
  Rng rng(8);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 1 + rng.below(20);
    const RisInstance inst = sample_ris_instance(rng, n, 1 + rng.below(4), true);
    const auto prob = build_problem(inst);
    const DiscretePhaseSet dps(1 + static_cast<int>(rng.below(3)));
    std::vector<std::int64_t> idx(n + 1);
    for (auto& k : idx) k = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(dps.levels())));
    const auto aug = PhaseVector::on_lattice(idx, dps);
    const auto rot = derotate(aug, dps);
    EXPECT_TRUE(testing::on_lattice_exactly(rot, dps));
    EXPECT_NEAR(ris_objective(prob, rot), objective(prob.A, aug, Norm::L2), 1e-9);

    const auto cont = random_phases(rng, n + 1);
    EXPECT_NEAR(ris_objective(prob, derotate(cont, std::nullopt)), objective(prob.A, cont, Norm::L2), 1e-9);
  }
}

TEST(SolveRis, SmallLosMatchesEnumeration) {
  // N=5, M=2, B=1 with a direct link: compare against all 2^5 RIS configurations.
  Rng rng(9);
  int equal = 0;
  const int trials = 50;
  for (int t = 0; t < trials; ++t) {
    const RisInstance inst = sample_ris_instance(rng, 5, 2, true);
    SolveConfig cfg;
    cfg.dps = DiscretePhaseSet(1);
    const auto sol = solve_ris(build_problem(inst), cfg);
    const double best = testing::naive_max(5, 1, [&](const std::vector<cplx>& x) {
      return direct_received_norm(inst, x);
    });
    EXPECT_LE(sol.objective, best + 1e-9);
    EXPECT_NEAR(direct_received_norm(inst, sol.phases.unimodular()), sol.objective, 1e-9);
    if (sol.objective >= best - 1e-9) ++equal;
  }
  std::cout << "[ ris ] N=5 LoS pipeline reaching the enumerated optimum: " << equal << "/" << trials << "\n";
  EXPECT_GT(equal, trials / 2);
}

TEST(SolveRis, FirstSeedLosInstanceIsOptimal) {
  Rng rng(2024);
  const RisInstance inst = sample_ris_instance(rng, 5, 2, true);
  SolveConfig cfg;
  cfg.dps = DiscretePhaseSet(1);
  const auto sol = solve_ris(build_problem(inst), cfg);
  const double best = testing::naive_max(5, 1, [&](const std::vector<cplx>& x) {
    return direct_received_norm(inst, x);
  });
  EXPECT_NEAR(sol.objective, best, 1e-9);
}

TEST(Snr, Definitions) {
  const auto s = snr_from_objective(3.0, 1.0, 1.0);
  EXPECT_NEAR(s.linear, 9.0, 1e-12);
  EXPECT_NEAR(s.db, 10.0 * std::log10(9.0), 1e-12);
  EXPECT_NEAR(snr_from_objective(3.0, 2.0, 1.0).db - s.db, 10.0 * std::log10(2.0), 1e-12);
  EXPECT_NEAR(10.0 * std::log10(2.0), 3.0103, 1e-4);
}

TEST(Snr, MatchesObjective) {
  Rng rng(10);
  RisInstance inst = sample_ris_instance(rng, 8, 3, true);
  inst.transmit_power = 2.5;
  inst.noise_variance = 0.5;
  const auto prob = build_problem(inst);
  const auto phases = random_phases(rng, 8);
  const double c = ris_objective(prob, phases);
  EXPECT_NEAR(snr(prob, phases, inst).linear, 2.5 * c * c / 0.5, 1e-9);
}

TEST(Snr, OptimisedBeatsRandomConfigurations) {
  Rng rng(11);
  const RisInstance inst = sample_ris_instance(rng, 100, 4, false);
  const auto prob = build_problem(inst);
  SolveConfig cfg;
  cfg.dps = DiscretePhaseSet(1);
  const auto sol = solve_ris(prob, cfg);
  const double best_db = snr(prob, sol.phases, inst).db;
  int beaten = 0;
  for (int t = 0; t < 10000; ++t) {
    std::vector<std::int64_t> idx(100);
    for (auto& k : idx) k = static_cast<std::int64_t>(rng.below(2));
    if (best_db >= snr(prob, PhaseVector::on_lattice(idx, *cfg.dps), inst).db) ++beaten;
  }
  EXPECT_GE(beaten, 9900);
}

TEST(SolveRis, DominatesHardRoundedContinuous) {
  Rng rng(12);
  for (int t = 0; t < 30; ++t) {
    const RisInstance inst = sample_ris_instance(rng, 40, 4, rng.below(2) == 1);
    const auto prob = build_problem(inst);
    SolveConfig cfg;
    cfg.dps = DiscretePhaseSet(1 + static_cast<int>(rng.below(2)));
    const auto sol = solve_ris(prob, cfg);
    SolveConfig cont = cfg;
    cont.dps.reset();
    const auto c = solve_ris(prob, cont);
    // Round the continuous solution with the auxiliary phase fixed at zero.
    const auto rounded = hard_round(c.phases, *cfg.dps);
    EXPECT_GE(snr(prob, sol.phases, inst).linear, snr(prob, rounded, inst).linear * (1 - 1e-9) - 1e-12);
  }
}

}  // namespace
}  // namespace unimod
