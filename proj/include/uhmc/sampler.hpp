#pragma once
#include <variant>
#include <vector>

#include "uhmc/integrator.hpp"
#include "uhmc/rng.hpp"

namespace uhmc {

struct ChainTrace {
  std::vector<Matrix> states;  // retained positions, states[0] == x0
  int steps = 0;               // total HMC steps taken
  int thin = 1;
  IntegratorConfig cfg;
};

// Observables f on the full state.
struct IntensiveMean {  // f(x) = (1/n) sum_i x^i_c
  int coord = 0;
};
struct IntensiveFunc {  // f(x) = (1/n) sum_i fhat(x^i) for a named built-in fhat
  enum class Kind { One, CoordSquare };
  Kind kind = Kind::One;
  int coord = 0;
};
struct ExtensiveSum {  // f(x) = sum_i x^i_c
  int coord = 0;
};
using Observable = std::variant<IntensiveMean, IntensiveFunc, ExtensiveSum>;

double eval_observable(const Observable& f, const Matrix& x);

// One unadjusted HMC transition: full velocity refreshment, Verlet flow,
// momentum discarded.
Matrix hmc_step(const MeanFieldModel& model, const Matrix& x, const IntegratorConfig& cfg,
                ParticleStreams& streams);

// Workspace variant; x is advanced in place.
struct HmcWorkspace {
  Matrix xi;
  VerletWorkspace verlet;
};
void hmc_step_inplace(const MeanFieldModel& model, Matrix& x, const IntegratorConfig& cfg,
                      ParticleStreams& streams, HmcWorkspace& ws);

// m iterated HMC steps from x0, retaining every thin-th state plus the last.
ChainTrace run_chain(const MeanFieldModel& model, const Matrix& x0, int m,
                     const IntegratorConfig& cfg, ParticleStreams& streams, int thin = 1);

// A_{m,b} f = (1/m) sum_{k=b}^{b+m-1} f(X_k); requires an unthinned trace.
double ergodic_average(const ChainTrace& trace, const Observable& f, int burn_in, int window);

}  // namespace uhmc
