#include "unimod/solver.hpp"

#include <cmath>

#include "unimod/das.hpp"

namespace unimod {

std::string to_string(Termination t) {
  return t == Termination::Converged ? "converged" : "iteration-cap";
}

void SolveConfig::validate() const {
  if (!(tolerance > 0.0)) throw InvalidArgument("tolerance must be positive");
  if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
}

double objective(const ComplexMatrix& a, const PhaseVector& phases, Norm p) {
  const ComplexVector x = phases.unimodular();
  return norm_lp(a.apply(x), p);
}

ComplexVector dual_witness(std::span<const cplx> w, Norm q) {
  ComplexVector z(w.begin(), w.end());
  switch (q) {
    case Norm::L2: {
      const double n2 = norm_lp(w, Norm::L2);
      if (n2 == 0.0) throw DegenerateInput("dual witness of a zero vector");
      for (cplx& a : z) a /= n2;
      return z;
    }
    case Norm::Inf: {
      if (norm_lp(w, Norm::Inf) == 0.0) throw DegenerateInput("dual witness of a zero vector");
      for (cplx& a : z) a = (a == cplx{}) ? cplx{1.0, 0.0} : a / std::abs(a);
      return z;
    }
    case Norm::L1:
      break;
  }
  throw Unsupported("closed-form dual witness exists only for q = 2 and q = inf");
}

PhaseVector continuous_phase_step(std::span<const cplx> u) {
  std::vector<double> phases(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    phases[i] = (u[i] == cplx{}) ? 0.0 : std::arg(u[i]);
  }
  return PhaseVector::continuous(std::move(phases));
}

namespace {

void require_iterable_norm(Norm p) {
  if (p == Norm::Inf) {
    throw Unsupported("the alternating iteration covers p = 1 and p = 2; use solve_linf for p = inf");
  }
}

template <class PhaseStep>
SolveTrace iterate(const ComplexMatrix& a, const SolveConfig& cfg, const PhaseVector& start,
                   PhaseStep&& phase_step) {
  cfg.validate();
  require_iterable_norm(cfg.norm);
  if (start.size() != a.cols()) throw InvalidArgument("initial phase vector has the wrong length");
  const Norm q = dual_of(cfg.norm);

  SolveTrace trace;
  trace.phases = start;
  ComplexVector w = a.apply(start.unimodular());
  double cost = norm_lp(w, cfg.norm);
  if (cost == 0.0) throw DegenerateInput("A*e^{j*Omega} vanishes at the starting point");
  trace.costs.push_back(cost);

  trace.termination = Termination::IterationCap;
  while (trace.iterations < cfg.max_iterations) {
    ComplexVector z = dual_witness(w, q);
    PhaseVector next = phase_step(a.adjoint_apply(z));
    trace.witnesses.push_back(std::move(z));

    w = a.apply(next.unimodular());
    const double next_cost = norm_lp(w, cfg.norm);
    ++trace.iterations;
    trace.costs.push_back(next_cost);

    const bool fixed_point = next == trace.phases;
    trace.phases = std::move(next);
    if (fixed_point || std::abs(next_cost - cost) <= cfg.tolerance) {
      trace.termination = Termination::Converged;
      break;
    }
    cost = next_cost;
  }
  trace.witness = trace.witnesses.back();
  return trace;
}

}  // namespace

SolveTrace solve_discrete(const ComplexMatrix& a, const SolveConfig& cfg, const PhaseVector& start) {
  if (!cfg.dps) throw InvalidArgument("discrete solve needs a phase lattice");
  if (!start.has_lattice()) throw InvalidArgument("discrete solve must start on the lattice");
  const DiscretePhaseSet dps = *cfg.dps;
  return iterate(a, cfg, start, [&](const ComplexVector& v) { return das_maximize(v, dps).phases; });
}

SolveTrace solve_continuous(const ComplexMatrix& a, const SolveConfig& cfg, const PhaseVector& start) {
  return iterate(a, cfg, start, [](const ComplexVector& u) { return continuous_phase_step(u); });
}

PhaseVector hard_round(const PhaseVector& phases, const DiscretePhaseSet& dps) {
  std::vector<std::int64_t> idx(phases.size());
  for (std::size_t i = 0; i < phases.size(); ++i) idx[i] = nearest_lattice(phases[i], dps);
  return PhaseVector::on_lattice(std::move(idx), dps);
}

SolveTrace lift(const ComplexMatrix& a, const PhaseVector& rounded, const SolveConfig& cfg) {
  return solve_discrete(a, cfg, rounded);
}

LinfResult solve_linf(const ComplexMatrix& a, const DiscretePhaseSet& dps) {
  LinfResult best;
  best.objective = -1.0;
  ComplexVector conj_row(a.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto row = a.row(r);
    bool nonzero = false;
    for (std::size_t j = 0; j < row.size(); ++j) {
      conj_row[j] = std::conj(row[j]);
      nonzero = nonzero || row[j] != cplx{};
    }
    if (!nonzero) continue;
    DasResult res = das_maximize(conj_row, dps);
    if (res.objective > best.objective + 1e-12) {
      best.phases = std::move(res.phases);
      best.row = r;
      best.objective = res.objective;
    }
  }
  if (best.objective < 0.0) throw DegenerateInput("every row of A is zero");
  return best;
}

PhaseVector default_initializer(const ComplexMatrix& a, Norm p) {
  const Norm row_norm = p == Norm::L1 ? Norm::L1 : Norm::L2;
  std::size_t best_row = 0;
  double best = -1.0;
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const double v = norm_lp(a.row(r), row_norm);
    if (v > best) {
      best = v;
      best_row = r;
    }
  }
  if (best == 0.0) throw DegenerateInput("A is identically zero");
  ComplexVector selector(a.rows());
  selector[best_row] = 1.0;
  return continuous_phase_step(a.adjoint_apply(selector));
}

namespace {

PhaseVector random_continuous(Rng& rng, std::size_t n) {
  std::vector<double> phases(n);
  for (double& x : phases) x = kTwoPi * rng.uniform();
  return PhaseVector::continuous(std::move(phases));
}

std::vector<PhaseVector> continuous_starts(const ComplexMatrix& a, const SolveConfig& cfg) {
  std::vector<PhaseVector> starts;
  switch (cfg.init) {
    case InitPolicy::ContinuousWarmStart:
      starts.push_back(default_initializer(a, cfg.norm));
      break;
    case InitPolicy::Given:
      if (!cfg.initial) throw InvalidArgument("InitPolicy::Given without an initial phase vector");
      starts.push_back(*cfg.initial);
      break;
    case InitPolicy::Random: {
      Rng rng(cfg.seed, 0);
      starts.push_back(random_continuous(rng, a.cols()));
      break;
    }
  }
  for (int r = 1; r < cfg.restarts; ++r) {
    Rng rng(cfg.seed, stream_id({static_cast<std::uint64_t>(r)}));
    starts.push_back(random_continuous(rng, a.cols()));
  }
  return starts;
}

}  // namespace

SolveTrace continuous_pipeline(const ComplexMatrix& a, const SolveConfig& cfg) {
  cfg.validate();
  require_iterable_norm(cfg.norm);
  SolveConfig ccfg = cfg;
  ccfg.dps.reset();

  std::optional<SolveTrace> best;
  for (const PhaseVector& start : continuous_starts(a, cfg)) {
    SolveTrace t = solve_continuous(a, ccfg, start);
    if (!best || t.final_cost() > best->final_cost()) best = std::move(t);
  }
  return std::move(*best);
}

PipelineResult default_pipeline(const ComplexMatrix& a, const SolveConfig& cfg) {
  if (!cfg.dps) throw InvalidArgument("default_pipeline needs a phase lattice");
  PipelineResult out;
  out.continuous = continuous_pipeline(a, cfg);
  out.unrounded_cost = out.continuous.final_cost();
  out.rounded = hard_round(out.continuous.phases, *cfg.dps);
  out.rounded_cost = objective(a, out.rounded, cfg.norm);
  out.lifted = lift(a, out.rounded, cfg);
  return out;
}

PipelineResult default_pipeline(const ComplexMatrix& a, const DiscretePhaseSet& dps, Norm p) {
  SolveConfig cfg;
  cfg.norm = p;
  cfg.dps = dps;
  return default_pipeline(a, cfg);
}

}  // namespace unimod
