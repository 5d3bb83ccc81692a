#pragma once
#include <stdexcept>
#include <utility>

#include "uhmc/model.hpp"
#include "uhmc/types.hpp"

namespace uhmc {

// The step count is supplied directly (steps = T/h), so T/h integrality never
// depends on floating-point division.
struct IntegratorConfig {
  double T = 1.0;
  int steps = 10;

  double h() const { return T / steps; }
  void validate() const {
    if (!(T > 0)) throw std::invalid_argument("integrator duration T must be > 0");
    if (steps < 1) throw std::invalid_argument("integrator step count must be >= 1");
  }
};

// One velocity Verlet (kick-drift-kick) update.
PhasePoint verlet_step(const MeanFieldModel& model, const PhasePoint& phase, double h);

// In-place Verlet flow over cfg.steps steps with one gradient evaluation per
// step after the first. `grad` must write the full gradient of U at q into its
// output argument. An optional observer sees (step_index, q, p) after every
// step; step_index runs from 1 to steps.
template <class GradFn, class Observer>
void verlet_flow_core(Matrix& q, Matrix& p, double h, int steps, GradFn&& grad, Matrix& g,
                      Matrix& g_next, Observer&& observe) {
  grad(q, g);
  for (int s = 0; s < steps; ++s) {
    q += h * p - (0.5 * h * h) * g;
    grad(q, g_next);
    p -= (0.5 * h) * (g + g_next);
    g.swap(g_next);
    observe(s + 1, q, p);
  }
}

PhasePoint verlet_flow(const MeanFieldModel& model, const PhasePoint& phase,
                       const IntegratorConfig& cfg);

// Preallocated-workspace variant for hot loops; q and p are updated in place.
struct VerletWorkspace {
  Matrix g, g_next;
};
void verlet_flow_inplace(const MeanFieldModel& model, Matrix& q, Matrix& p,
                         const IntegratorConfig& cfg, VerletWorkspace& ws);

// Flow with the force switched off (free dynamics test hook).
void free_flow_inplace(Matrix& q, Matrix& p, const IntegratorConfig& cfg);

// Analytic flow for V = k|x|^2/2, eps = 0; test oracle.
PhasePoint harmonic_exact_flow(double k, const PhasePoint& phase, double t);

}  // namespace uhmc
