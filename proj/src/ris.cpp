#include "unimod/ris.hpp"

#include <cmath>

namespace unimod {

void RisInstance::validate() const {
  if (h_ue_ris.size() != H_ris_bs.rows()) {
    throw InvalidArgument("h_ue_ris length must equal the number of rows of H_ris_bs");
  }
  if (h_d && h_d->size() != H_ris_bs.cols()) {
    throw InvalidArgument("h_d length must equal the number of columns of H_ris_bs");
  }
  if (!(transmit_power > 0.0)) throw InvalidArgument("transmit power must be positive");
  if (!(noise_variance > 0.0)) throw InvalidArgument("noise variance must be positive");
}

ComplexMatrix build_phi(const RisInstance& inst) {
  inst.validate();
  ComplexMatrix phi(inst.elements(), inst.antennas());
  for (std::size_t i = 0; i < inst.elements(); ++i) {
    const cplx w = std::conj(inst.h_ue_ris[i]);
    for (std::size_t j = 0; j < inst.antennas(); ++j) phi(i, j) = w * inst.H_ris_bs(i, j);
  }
  return phi;
}

BeamformingProblem build_problem(const RisInstance& inst) {
  const ComplexMatrix phi = build_phi(inst);
  const std::size_t n = inst.elements();
  const std::size_t m = inst.antennas();
  BeamformingProblem prob;
  prob.augmented = inst.h_d.has_value();
  prob.A = ComplexMatrix(m, prob.augmented ? n + 1 : n);
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t c = 0; c < n; ++c) prob.A(r, c) = phi(c, r);
    if (prob.augmented) prob.A(r, n) = std::conj((*inst.h_d)[r]);
  }
  return prob;
}

ComplexVector cascaded_channel(const RisInstance& inst, const PhaseVector& phases) {
  inst.validate();
  if (phases.size() != inst.elements()) throw InvalidArgument("phase vector length must equal N");
  ComplexVector g(inst.antennas());
  for (std::size_t i = 0; i < inst.elements(); ++i) {
    const cplx w = std::conj(inst.h_ue_ris[i]) * std::polar(1.0, phases[i]);
    for (std::size_t j = 0; j < inst.antennas(); ++j) g[j] += w * inst.H_ris_bs(i, j);
  }
  if (inst.h_d) {
    for (std::size_t j = 0; j < inst.antennas(); ++j) g[j] += std::conj((*inst.h_d)[j]);
  }
  return g;
}

PhaseVector derotate(const PhaseVector& augmented_phases, const std::optional<DiscretePhaseSet>& dps) {
  const std::size_t n = augmented_phases.size();
  if (n < 2) throw InvalidArgument("augmented phase vector needs at least two entries");
  if (dps && augmented_phases.has_lattice()) {
    const auto& idx = augmented_phases.indices();
    std::vector<std::int64_t> out(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) out[i] = dps->reduce(idx[i] - idx[n - 1]);
    return PhaseVector::on_lattice(std::move(out), *dps);
  }
  std::vector<double> out(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) out[i] = augmented_phases[i] - augmented_phases[n - 1];
  return PhaseVector::continuous(std::move(out));
}

double ris_objective(const BeamformingProblem& prob, const PhaseVector& phases) {
  if (phases.size() != prob.elements()) throw InvalidArgument("phase vector length must equal N");
  ComplexVector x = phases.unimodular();
  if (prob.augmented) x.push_back(1.0);
  return norm_lp(prob.A.apply(x), Norm::L2);
}

RisSolution solve_ris(const BeamformingProblem& prob, const SolveConfig& cfg) {
  const PhaseVector raw =
      cfg.dps ? default_pipeline(prob.A, cfg).lifted.phases : continuous_pipeline(prob.A, cfg).phases;
  RisSolution out;
  out.phases = prob.augmented ? derotate(raw, cfg.dps) : raw;
  out.objective = ris_objective(prob, out.phases);
  return out;
}

Snr snr_from_objective(double objective, double transmit_power, double noise_variance) {
  Snr s;
  s.linear = transmit_power * objective * objective / noise_variance;
  s.db = 10.0 * std::log10(s.linear);
  return s;
}

Snr snr(const BeamformingProblem& prob, const PhaseVector& phases, const RisInstance& inst) {
  return snr_from_objective(ris_objective(prob, phases), inst.transmit_power, inst.noise_variance);
}

RisInstance sample_ris_instance(Rng& rng, std::size_t elements, std::size_t antennas, bool direct_link,
                                double variance) {
  RisInstance inst;
  inst.H_ris_bs = sample_complex_gaussian(rng, elements, antennas, variance);
  inst.h_ue_ris = sample_complex_gaussian_vector(rng, elements, variance);
  if (direct_link) inst.h_d = sample_complex_gaussian_vector(rng, antennas, variance);
  return inst;
}

}  // namespace unimod
