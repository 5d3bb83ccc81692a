#include "uhmc/coupling.hpp"

#include <cmath>
#include <stdexcept>

#include "uhmc/theory.hpp"

namespace uhmc {

void CouplingParams::validate() const {
  if (!(gamma > 0)) throw std::invalid_argument("coupling gamma must be > 0");
  if (!(tol > 0)) throw std::invalid_argument("coupling tol must be > 0");
  if (R_tilde < 0) throw std::invalid_argument("coupling R_tilde must be >= 0");
  if (max_steps < 0) throw std::invalid_argument("coupling max_steps must be >= 0");
}

Vector couple_velocity_particle(const Eigen::Ref<const Vector>& z,
                                const Eigen::Ref<const Vector>& xi, double u,
                                const CouplingParams& params, CouplingBranch* branch) {
  const double zn = z.norm();
  if (zn >= params.R_tilde) {
    if (branch) *branch = CouplingBranch::Synchronous;
    return xi;
  }
  // e is the first coordinate unit vector when z = 0; the branch output is xi
  // either way since the shift vanishes and the log-ratio is 0.
  Vector e = Vector::Zero(z.size());
  if (zn > 0)
    e = z / zn;
  else
    e[0] = 1.0;
  const double exi = e.dot(xi);
  // phi(e.xi + gamma|z|) / phi(e.xi) in log space
  const double log_ratio = -params.gamma * zn * exi - 0.5 * params.gamma * params.gamma * zn * zn;
  if (params.skip_reflection || std::log(u) <= log_ratio) {
    if (branch) *branch = CouplingBranch::Shifted;
    return xi + params.gamma * z;
  }
  if (branch) *branch = CouplingBranch::Reflected;
  return xi - 2.0 * exi * e;
}

namespace {

CouplingStepStats stats_of(const Matrix& x, const Matrix& y, double T, double rho_R_1,
                           const std::vector<CouplingBranch>* branch) {
  CouplingStepStats s;
  s.ell1 = ell1_distance(x, y);
  s.mean_distance = s.ell1 / static_cast<double>(x.cols());
  s.rho = rho_distance(x, y, T, rho_R_1);
  if (branch) {
    for (auto b : *branch) {
      if (b == CouplingBranch::Synchronous)
        ++s.n_sync;
      else if (b == CouplingBranch::Shifted)
        ++s.n_shift;
      else
        ++s.n_reflect;
    }
  }
  return s;
}

double effective_rho_R1(const CouplingParams& params, double T) {
  if (params.rho_R_1 > 0) return params.rho_R_1;
  const double rt = std::isfinite(params.R_tilde) ? params.R_tilde : 0.0;
  return 1.25 * (rt + 2.0 * T);
}

}  // namespace

void coupled_hmc_step(const MeanFieldModel& model, CoupledPhase& phase,
                      const IntegratorConfig& cfg, const CouplingParams& params,
                      ParticleStreams& streams, CoupledWorkspace& ws) {
  cfg.validate();
  params.validate();
  const int n = model.n, d = model.d;
  ws.xi.resize(d, n);
  ws.eta.resize(d, n);
  phase.branch.resize(n);
  for (int i = 0; i < n; ++i) {
    auto& stream = streams.particle(i);
    for (int r = 0; r < d; ++r) ws.xi(r, i) = stream.normal();
    const double u = stream.uniform();
    ws.eta.col(i) = couple_velocity_particle(phase.x.col(i) - phase.y.col(i), ws.xi.col(i), u,
                                             params, &phase.branch[i]);
  }
  if (params.free_dynamics) {
    free_flow_inplace(phase.x, ws.xi, cfg);
    free_flow_inplace(phase.y, ws.eta, cfg);
  } else {
    verlet_flow_inplace(model, phase.x, ws.xi, cfg, ws.vx);
    verlet_flow_inplace(model, phase.y, ws.eta, cfg, ws.vy);
  }
}

CouplingTrace run_coupled_chain(const MeanFieldModel& model, const Matrix& x0, const Matrix& y0,
                                const IntegratorConfig& cfg, const CouplingParams& params,
                                ParticleStreams& streams, CoupledPhase* final_phase) {
  cfg.validate();
  params.validate();
  const double rho_r1 = effective_rho_R1(params, cfg.T);
  CoupledPhase phase{x0, y0, {}};
  CoupledWorkspace ws;
  CouplingTrace trace;
  trace.series.push_back(stats_of(phase.x, phase.y, cfg.T, rho_r1, nullptr));
  trace.converged = trace.series.back().mean_distance < params.tol;
  while (!trace.converged && trace.steps < params.max_steps) {
    coupled_hmc_step(model, phase, cfg, params, streams, ws);
    ++trace.steps;
    trace.series.push_back(stats_of(phase.x, phase.y, cfg.T, rho_r1, &phase.branch));
    trace.converged = trace.series.back().mean_distance < params.tol;
  }
  if (final_phase) *final_phase = std::move(phase);
  return trace;
}

}  // namespace uhmc
