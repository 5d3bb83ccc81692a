#pragma once
#include <limits>
#include <vector>

#include "uhmc/integrator.hpp"
#include "uhmc/rng.hpp"

namespace uhmc {

enum class CouplingBranch { Synchronous, Shifted, Reflected };

struct CouplingParams {
  double gamma = 1.0;
  // Particles with |x^i - y^i| >= R_tilde are coupled synchronously;
  // infinity keeps the shift/reflection construction active everywhere.
  double R_tilde = std::numeric_limits<double>::infinity();
  double tol = 1e-5;  // terminate when the mean particle distance drops below this
  int max_steps = 1000;
  // Radius of the concave profile used for the rho column of the trace;
  // <= 0 means "derive (5/4)(R_tilde + 2T) from the run duration", with an
  // infinite R_tilde treated as 0 there.
  double rho_R_1 = 0.0;
  bool free_dynamics = false;    // test hook: integrate with the force off
  bool skip_reflection = false;  // test hook: deliberately broken coupling

  void validate() const;
};

struct CoupledPhase {
  Matrix x, y;
  std::vector<CouplingBranch> branch;  // last branch per particle
};

struct CouplingStepStats {
  double mean_distance = 0.0;  // (1/n) sum_i |X^i - Y^i|
  double ell1 = 0.0;
  double rho = 0.0;
  int n_sync = 0, n_shift = 0, n_reflect = 0;
};

struct CouplingTrace {
  std::vector<CouplingStepStats> series;  // series[0] is the initial state
  bool converged = false;
  int steps = 0;
};

// Velocity refreshment for particle i of the second chain given the first
// chain's draw xi and the particle displacement z = x^i - y^i.
Vector couple_velocity_particle(const Eigen::Ref<const Vector>& z,
                                const Eigen::Ref<const Vector>& xi, double u,
                                const CouplingParams& params, CouplingBranch* branch = nullptr);

struct CoupledWorkspace {
  Matrix xi, eta;
  VerletWorkspace vx, vy;
};

// One coupled transition: draws xi ~ N(0, I_dn) plus one uniform per particle
// (uniforms are drawn even on the synchronous branch, keeping the streams
// aligned across branch compositions), builds eta particlewise, then advances
// both chains with the Verlet flow.
void coupled_hmc_step(const MeanFieldModel& model, CoupledPhase& phase,
                      const IntegratorConfig& cfg, const CouplingParams& params,
                      ParticleStreams& streams, CoupledWorkspace& ws);

// Iterates coupled steps until the mean particle distance drops below tol or
// max_steps is reached. Non-termination is reported, not an error.
CouplingTrace run_coupled_chain(const MeanFieldModel& model, const Matrix& x0, const Matrix& y0,
                                const IntegratorConfig& cfg, const CouplingParams& params,
                                ParticleStreams& streams, CoupledPhase* final_phase = nullptr);

}  // namespace uhmc
