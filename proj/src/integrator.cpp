#include "uhmc/integrator.hpp"

#include <cmath>

namespace uhmc {

namespace {
struct NoObserver {
  void operator()(int, const Matrix&, const Matrix&) const {}
};
}  // namespace

PhasePoint verlet_step(const MeanFieldModel& model, const PhasePoint& phase, double h) {
  if (!(h > 0)) throw std::invalid_argument("verlet_step requires h > 0");
  PhasePoint out = phase;
  VerletWorkspace ws;
  auto grad = [&](const Matrix& q, Matrix& g) { grad_full_into(model, q, g); };
  verlet_flow_core(out.q, out.p, h, 1, grad, ws.g, ws.g_next, NoObserver{});
  return out;
}

PhasePoint verlet_flow(const MeanFieldModel& model, const PhasePoint& phase,
                       const IntegratorConfig& cfg) {
  cfg.validate();
  PhasePoint out = phase;
  VerletWorkspace ws;
  verlet_flow_inplace(model, out.q, out.p, cfg, ws);
  return out;
}

void verlet_flow_inplace(const MeanFieldModel& model, Matrix& q, Matrix& p,
                         const IntegratorConfig& cfg, VerletWorkspace& ws) {
  cfg.validate();
  auto grad = [&](const Matrix& qq, Matrix& g) { grad_full_into(model, qq, g); };
  verlet_flow_core(q, p, cfg.h(), cfg.steps, grad, ws.g, ws.g_next, NoObserver{});
}

void free_flow_inplace(Matrix& q, Matrix& p, const IntegratorConfig& cfg) {
  cfg.validate();
  // With zero force the Verlet flow is exactly q += h p per step.
  q += cfg.T * p;
}

PhasePoint harmonic_exact_flow(double k, const PhasePoint& phase, double t) {
  if (!(k > 0)) throw std::invalid_argument("harmonic_exact_flow requires k > 0");
  const double w = std::sqrt(k);
  const double c = std::cos(w * t), s = std::sin(w * t);
  PhasePoint out;
  out.q = c * phase.q + (s / w) * phase.p;
  out.p = -w * s * phase.q + c * phase.p;
  return out;
}

}  // namespace uhmc
