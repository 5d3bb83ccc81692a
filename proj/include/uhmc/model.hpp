#pragma once
#include <stdexcept>
#include <variant>

#include "uhmc/types.hpp"

namespace uhmc {

// Confinement potentials V acting on a single particle.
struct QuadraticConfinement {
  double k = 1.0;  // V(x) = k|x|^2/2
};

// V(x) = -log sum_k exp(-|x - mu_k|^2 / 2), equal weights, unit covariance,
// normalization constant dropped (gradients unaffected).
struct GaussianMixtureConfinement {
  Matrix means;  // d x m, one column per component
};

// V(x) = (a - x1)^2 + b (x2 - x1^2)^2, d = 2 only.
struct RosenbrockConfinement {
  double a = 1.0;
  double b = 10.0;
};

using ConfinementSpec =
    std::variant<QuadraticConfinement, GaussianMixtureConfinement, RosenbrockConfinement>;

// Pairwise interaction W(u).
struct ZeroInteraction {};

struct QuadraticInteraction {
  double sign = 1.0;  // W(u) = sign * |u|^2 / 2 ; sign = -1 is repulsive
};

using InteractionSpec = std::variant<ZeroInteraction, QuadraticInteraction>;

struct MeanFieldModel {
  ConfinementSpec confinement;
  InteractionSpec interaction;
  double epsilon = 0.0;  // interaction strength, >= 0 after normalization
  int n = 1;             // particles
  int d = 1;             // dimension per particle

  // Validates the spec and folds a negative epsilon into the interaction sign.
  static MeanFieldModel make(ConfinementSpec v, InteractionSpec w, double epsilon, int n, int d);
};

struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// U(x) = sum_i [ V(x^i) + (eps/n) sum_{j != i} W(x^i - x^j) ]
double potential_energy(const MeanFieldModel& model, const Matrix& x);

// grad of U with respect to particle i.
Vector grad_particle(const MeanFieldModel& model, const Matrix& x, int i);

// All particle gradients, d x n; column i equals grad_particle(model, x, i) bitwise.
void grad_full_into(const MeanFieldModel& model, const Matrix& x, Matrix& out);
Matrix grad_full(const MeanFieldModel& model, const Matrix& x);

// Single-particle confinement pieces, used by both energy and gradient paths.
double confinement_energy(const ConfinementSpec& v, const Eigen::Ref<const Vector>& p);
Vector confinement_grad(const ConfinementSpec& v, const Eigen::Ref<const Vector>& p);

}  // namespace uhmc
