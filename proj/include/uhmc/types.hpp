#pragma once
#include <Eigen/Core>

namespace uhmc {

// Positions and velocities are stored d x n: one column per particle.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

struct PhasePoint {
  Matrix q;
  Matrix p;
};

}  // namespace uhmc
