#pragma once

// Alternating inner-product maximisation of ||A e^{j*Omega}||_p.
//
// Each iteration first picks the dual witness z_k (unit q-norm) attaining
// ||A e^{j*Omega_k}||_p, then maximises |<A^H z_k, e^{j*Omega}>| over the
// phases: by DaS on the lattice, or by phase alignment in continuous mode.
// Both steps can only raise the cost, so every trace is non-decreasing.

#include <cstdint>
#include <optional>
#include <vector>

#include "unimod/core.hpp"

namespace unimod {

enum class InitPolicy { ContinuousWarmStart, Given, Random };
enum class Termination { Converged, IterationCap };

std::string to_string(Termination t);

struct SolveConfig {
  Norm norm = Norm::L2;
  std::optional<DiscretePhaseSet> dps;  // empty: continuous phases
  double tolerance = 1e-10;
  int max_iterations = 500;
  InitPolicy init = InitPolicy::ContinuousWarmStart;
  std::optional<PhaseVector> initial;  // used with InitPolicy::Given
  int restarts = 1;                    // continuous starts tried by default_pipeline
  std::uint64_t seed = 0;

  void validate() const;
};

struct SolveTrace {
  std::vector<double> costs;  // costs[k] = ||A e^{j*Omega_k}||_p
  int iterations = 0;
  Termination termination = Termination::Converged;
  PhaseVector phases;
  ComplexVector witness;                  // z of the last dual step
  std::vector<ComplexVector> witnesses;   // z_0, z_1, ...

  double final_cost() const { return costs.back(); }
};

double objective(const ComplexMatrix& a, const PhaseVector& phases, Norm p);

// Unit-q-norm z with <z, w> = ||w||_p (global phase fixed to zero).
// q = inf maps zero entries to 1.
ComplexVector dual_witness(std::span<const cplx> w, Norm q);

// Omega = angle(u), attaining |<u, e^{j*Omega}>| = ||u||_1.
PhaseVector continuous_phase_step(std::span<const cplx> u);

SolveTrace solve_discrete(const ComplexMatrix& a, const SolveConfig& cfg, const PhaseVector& start);
SolveTrace solve_continuous(const ComplexMatrix& a, const SolveConfig& cfg, const PhaseVector& start);

PhaseVector hard_round(const PhaseVector& phases, const DiscretePhaseSet& dps);

// Discrete iteration restarted from a rounded point.
SolveTrace lift(const ComplexMatrix& a, const PhaseVector& rounded, const SolveConfig& cfg);

struct LinfResult {
  PhaseVector phases;
  std::size_t row = 0;
  double objective = 0.0;
};

// Exact optimum of ||A e^{j*Omega}||_inf over the lattice: one DaS per row.
LinfResult solve_linf(const ComplexMatrix& a, const DiscretePhaseSet& dps);

// Omega_0 = angle(conj(a_r)) for the row r of largest p-norm (p = 1 or 2),
// i.e. phases that combine that row coherently.
PhaseVector default_initializer(const ComplexMatrix& a, Norm p);

struct PipelineResult {
  SolveTrace continuous;   // best continuous run
  PhaseVector rounded;
  double unrounded_cost = 0.0;
  double rounded_cost = 0.0;
  SolveTrace lifted;

  double cost() const { return lifted.final_cost(); }
};

// Continuous iteration -> hard rounding -> lifting. cfg.dps is required.
PipelineResult default_pipeline(const ComplexMatrix& a, const SolveConfig& cfg);
PipelineResult default_pipeline(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p);

// Continuous-only counterpart: best continuous trace over cfg's starts.
SolveTrace continuous_pipeline(const ComplexMatrix& a, const SolveConfig& cfg);

}  // namespace unimod
