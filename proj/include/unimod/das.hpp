#pragma once

// Divide-and-sort: exact maximisation of |<v, e^{j*Omega}>| over the B-bit
// lattice in O(n*2^B + n*log n).
//
// For a fixed auxiliary angle psi each element independently picks the
// lattice phase whose rotated phasor lands closest to psi. As psi sweeps
// the circle the joint choice is piecewise constant on n*2^B arcs, and one
// of those arcs contains the optimum. Reducing every angle modulo the
// lattice step and sorting the remainders fixes the order in which the arc
// boundaries are crossed, so the candidates can be generated (and scored
// with a running sum) without materialising the arrangement.

#include <cstdint>
#include <span>
#include <vector>

#include "unimod/core.hpp"

namespace unimod {

struct PolarDecomposition {
  std::vector<double> magnitudes;
  std::vector<double> angles;  // wrapped; 0 for zero entries
  std::vector<std::size_t> zero_mask;
};

PolarDecomposition polar_decompose(std::span<const cplx> v);

// Lattice index n maximising cos(psi - (tau + n*step)). The winning region
// [tau + n*step - step/2, tau + n*step + step/2) is half-open, so a psi on an
// edge goes to the region centred above it.
std::int64_t per_element_best(double psi, double tau, const DiscretePhaseSet& dps);

/// Sweep order of the arc boundaries for one polar decomposition.
///
/// Region l (0-based) is the arc entered after crossing boundary l. In it the
/// element at sorted position p carries shift (l+1)/n' + (p < (l+1)%n' ? 1 : 0)
/// where n' is the number of nonzero entries, and its lattice index is that
/// shift minus its offset (mod 2^B). The last region has every shift at zero.
struct RegionEncoding {
  std::vector<std::size_t> order;        // nonzero entries, by reduced angle then index
  std::vector<double> reduced;           // angle mod step, per original entry
  std::vector<std::int64_t> offsets;     // floor(angle / step), per original entry
  std::vector<double> boundaries;        // n' * 2^B crossing angles, increasing, one full turn

  std::size_t region_count() const { return boundaries.size(); }
  // Shift (in lattice steps) carried by the element at sorted position pos in region l.
  std::int64_t shift(std::size_t region, std::size_t pos) const;
};

RegionEncoding encode_regions(const PolarDecomposition& pd, const DiscretePhaseSet& dps);

// Lattice configuration of one region; zero-magnitude entries get index 0.
PhaseVector region_candidate(const RegionEncoding& enc, const PolarDecomposition& pd,
                             std::size_t region, const DiscretePhaseSet& dps);

struct CandidateSet {
  std::vector<PhaseVector> candidates;
  // |sum_i magnitude_i * e^{j(angle_i + Omega_i)}| from the running sum.
  std::vector<double> objectives;
};

// All n'*2^B candidates in sweep order: the all-zero-shift region first, then
// regions 0, 1, ..., n'*2^B - 2. The objective is taken against the
// decomposed vector w itself, i.e. |sum w_i e^{j*Omega_i}|.
CandidateSet build_candidates(const PolarDecomposition& pd, const DiscretePhaseSet& dps);

struct DasResult {
  PhaseVector phases;
  double objective = 0.0;
};

// argmax over the lattice of |<v, e^{j*Omega}>| = |sum conj(v_i) e^{j*Omega_i}|.
// Among candidates within 1e-12 of each other the earliest in sweep order wins.
DasResult das_maximize(std::span<const cplx> v, const DiscretePhaseSet& dps);

}  // namespace unimod
