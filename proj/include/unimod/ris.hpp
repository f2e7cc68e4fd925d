#pragma once

// RIS-aided MISO beamforming as a norm maximisation.
//
// With maximum-ratio transmission the received power is
// P * ||h_ue_ris^H diag(e^{j*Omega}) H_ris_bs + h_d^H||^2, and the cascaded
// channel equals [Phi^T, conj(h_d)] [e^{j*Omega}; 1] with
// Phi = diag(h_ue_ris^H) H_ris_bs.

#include <optional>

#include "unimod/core.hpp"
#include "unimod/solver.hpp"

namespace unimod {

struct RisInstance {
  ComplexMatrix H_ris_bs;                // N x M
  ComplexVector h_ue_ris;                // N
  std::optional<ComplexVector> h_d;      // M; absent for NLoS
  double transmit_power = 1.0;
  double noise_variance = 1.0;

  std::size_t elements() const { return H_ris_bs.rows(); }
  std::size_t antennas() const { return H_ris_bs.cols(); }

  void validate() const;
};

struct BeamformingProblem {
  ComplexMatrix A;          // M x N, or M x (N+1) when augmented
  bool augmented = false;   // last column is conj(h_d) carrying an auxiliary phase

  std::size_t elements() const { return augmented ? A.cols() - 1 : A.cols(); }
};

ComplexMatrix build_phi(const RisInstance& inst);
BeamformingProblem build_problem(const RisInstance& inst);

// Cascaded channel h_ue_ris^H diag(e^{j*Omega}) H_ris_bs + h_d^H, computed
// directly from the instance (no Phi).
ComplexVector cascaded_channel(const RisInstance& inst, const PhaseVector& phases);

struct RisSolution {
  PhaseVector phases;   // N RIS phases, auxiliary phase rotated out
  double objective = 0.0;
};

// With cfg.dps: full discrete pipeline; without: continuous iteration.
RisSolution solve_ris(const BeamformingProblem& prob, const SolveConfig& cfg);

// Phases with the auxiliary (last) phase removed: Omega_i - Omega_{N+1}.
PhaseVector derotate(const PhaseVector& augmented_phases, const std::optional<DiscretePhaseSet>& dps);

// ||A [e^{j*Omega}; 1]||_2, or ||A e^{j*Omega}||_2 for NLoS.
double ris_objective(const BeamformingProblem& prob, const PhaseVector& phases);

struct Snr {
  double linear = 0.0;
  double db = 0.0;
};

Snr snr(const BeamformingProblem& prob, const PhaseVector& phases, const RisInstance& inst);
Snr snr_from_objective(double objective, double transmit_power, double noise_variance);

// i.i.d. CN(0, variance) channels.
RisInstance sample_ris_instance(Rng& rng, std::size_t elements, std::size_t antennas, bool direct_link,
                                double variance = 1.0);

}  // namespace unimod
