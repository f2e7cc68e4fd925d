#pragma once

// Reference searches used to check the solvers: full enumeration of the
// lattice (small instances only) and uniform random sampling.

#include <cstdint>
#include <span>

#include "unimod/core.hpp"

namespace unimod {

// Enumeration refuses instances with n*B above this (2^24 ~ 16.7M points).
inline constexpr int kExhaustiveBitBudget = 24;

struct OracleResult {
  PhaseVector best;
  double objective = 0.0;
  std::uint64_t evaluated = 0;
};

// max over the lattice of |<v, e^{j*Omega}>|. Ties keep the first
// configuration in lexicographic index order (entry 0 most significant).
// The result does not depend on the worker count.
OracleResult exhaustive_inner(std::span<const cplx> v, const DiscretePhaseSet& dps, unsigned threads = 1);

// max over the lattice of ||A e^{j*Omega}||_p, same tie rule.
OracleResult exhaustive_norm(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p,
                             unsigned threads = 1);

// Best of `trials` uniform lattice draws.
OracleResult random_search(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p,
                           std::uint64_t trials, Rng& rng);

}  // namespace unimod
