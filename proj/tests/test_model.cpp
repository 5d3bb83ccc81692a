#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "uhmc/model.hpp"
#include "uhmc/rng.hpp"

using namespace uhmc;

namespace {

Matrix random_matrix(int d, int n, NormalStream& rng, double scale = 1.0) {
  Matrix x(d, n);
  for (int i = 0; i < n; ++i)
    for (int r = 0; r < d; ++r) x(r, i) = scale * rng.normal();
  return x;
}

Matrix fd_gradient(const MeanFieldModel& model, const Matrix& x, double eps = 1e-5) {
  Matrix g(x.rows(), x.cols());
  Matrix xp = x, xm = x;
  for (int i = 0; i < x.cols(); ++i) {
    for (int r = 0; r < x.rows(); ++r) {
      xp(r, i) += eps;
      xm(r, i) -= eps;
      g(r, i) = (potential_energy(model, xp) - potential_energy(model, xm)) / (2 * eps);
      xp(r, i) = x(r, i);
      xm(r, i) = x(r, i);
    }
  }
  return g;
}

}  // namespace

TEST_CASE("potential energy, two quadratic particles") {
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, QuadraticInteraction{+1.0}, 0.01, 2, 1);
  Matrix x(1, 2);
  x << 1.0, -1.0;
  CHECK(potential_energy(m, x) == doctest::Approx(1.02).epsilon(1e-14));
}

TEST_CASE("gradient, two quadratic particles") {
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, QuadraticInteraction{+1.0}, 0.01, 2, 1);
  Matrix x(1, 2);
  x << 1.0, -1.0;
  CHECK(grad_particle(m, x, 0)(0) == doctest::Approx(1.02).epsilon(1e-14));
  Matrix g = grad_full(m, x);
  CHECK(g(0, 0) == doctest::Approx(1.02).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(-1.02).epsilon(1e-14));
}

TEST_CASE("single-component mixture gradient is x - mu") {
  Matrix mu(2, 1);
  mu << 0.0, 0.0;
  auto m = MeanFieldModel::make(GaussianMixtureConfinement{mu}, ZeroInteraction{}, 0.0, 1, 2);
  Matrix x(2, 1);
  x << 1.0, 2.0;
  Vector g = grad_particle(m, x, 0);
  CHECK(g(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g(1) == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("gradients match central finite differences") {
  NormalStream rng(123);
  Matrix means = random_matrix(2, 5, rng, 3.0);
  auto mixture =
      MeanFieldModel::make(GaussianMixtureConfinement{means}, QuadraticInteraction{+1.0}, 0.3, 4, 2);
  auto rosen = MeanFieldModel::make(RosenbrockConfinement{1.0, 10.0},
                                    QuadraticInteraction{-1.0}, 0.2, 3, 2);
  for (const auto& m : {mixture, rosen}) {
    for (int rep = 0; rep < 5; ++rep) {
      Matrix x = random_matrix(m.d, m.n, rng, 1.5);
      Matrix g = grad_full(m, x);
      Matrix fd = fd_gradient(m, x);
      const double scale = std::max(1.0, fd.cwiseAbs().maxCoeff());
      CHECK((g - fd).cwiseAbs().maxCoeff() / scale < 1e-6);
    }
  }
}

TEST_CASE("pair forces are antisymmetric: interaction gradient sums to zero") {
  NormalStream rng(7);
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, QuadraticInteraction{+1.0}, 0.7, 8, 3);
  auto m0 = MeanFieldModel::make(QuadraticConfinement{1.0}, ZeroInteraction{}, 0.0, 8, 3);
  for (int rep = 0; rep < 20; ++rep) {
    Matrix x = random_matrix(3, 8, rng, 2.0);
    Matrix inter = grad_full(m, x) - grad_full(m0, x);
    CHECK(inter.rowwise().sum().cwiseAbs().maxCoeff() < 1e-12 * m.n);
  }
}

TEST_CASE("interaction is translation invariant") {
  NormalStream rng(11);
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, QuadraticInteraction{+1.0}, 0.5, 6, 2);
  auto m0 = MeanFieldModel::make(QuadraticConfinement{1.0}, ZeroInteraction{}, 0.0, 6, 2);
  Matrix x = random_matrix(2, 6, rng);
  Matrix shift = x;
  shift.colwise() += Vector::Constant(2, 3.7);
  const double wx = potential_energy(m, x) - potential_energy(m0, x);
  const double wy = potential_energy(m, shift) - potential_energy(m0, shift);
  CHECK(wx == doctest::Approx(wy).epsilon(1e-12));
}

TEST_CASE("epsilon = 0 gradient is bitwise columnwise") {
  NormalStream rng(21);
  auto m = MeanFieldModel::make(QuadraticConfinement{2.5}, QuadraticInteraction{+1.0}, 0.0, 5, 2);
  Matrix x = random_matrix(2, 5, rng);
  Matrix g = grad_full(m, x);
  for (int i = 0; i < 5; ++i) {
    auto single = MeanFieldModel::make(QuadraticConfinement{2.5}, ZeroInteraction{}, 0.0, 1, 2);
    Matrix xi = x.col(i);
    Matrix gi = grad_full(single, xi);
    CHECK(g(0, i) == gi(0, 0));
    CHECK(g(1, i) == gi(1, 0));
  }
}

TEST_CASE("negative epsilon folds into the interaction sign") {
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, QuadraticInteraction{+1.0}, -0.3, 2, 1);
  CHECK(m.epsilon == 0.3);
  CHECK(std::get<QuadraticInteraction>(m.interaction).sign == -1.0);
}

TEST_CASE("grad_particle matches grad_full bitwise") {
  NormalStream rng(31);
  Matrix means = random_matrix(2, 3, rng, 2.0);
  auto m =
      MeanFieldModel::make(GaussianMixtureConfinement{means}, QuadraticInteraction{+1.0}, 0.4, 6, 2);
  Matrix x = random_matrix(2, 6, rng);
  Matrix g = grad_full(m, x);
  for (int i = 0; i < 6; ++i) {
    Vector gi = grad_particle(m, x, i);
    CHECK(gi(0) == g(0, i));
    CHECK(gi(1) == g(1, i));
  }
}

TEST_CASE("invalid model specs are rejected") {
  CHECK_THROWS_AS(MeanFieldModel::make(QuadraticConfinement{0.0}, ZeroInteraction{}, 0.0, 1, 1),
                  ModelError);
  CHECK_THROWS_AS(MeanFieldModel::make(QuadraticConfinement{1.0}, ZeroInteraction{}, 0.0, 0, 1),
                  ModelError);
  CHECK_THROWS_AS(
      MeanFieldModel::make(RosenbrockConfinement{1.0, 10.0}, ZeroInteraction{}, 0.0, 1, 3),
      ModelError);
  CHECK_THROWS_AS(
      MeanFieldModel::make(GaussianMixtureConfinement{Matrix(2, 0)}, ZeroInteraction{}, 0.0, 1, 2),
      ModelError);
  auto m = MeanFieldModel::make(QuadraticConfinement{1.0}, ZeroInteraction{}, 0.0, 2, 2);
  CHECK_THROWS_AS(potential_energy(m, Matrix::Zero(2, 3)), ModelError);
}
